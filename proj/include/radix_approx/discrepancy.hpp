#pragma once

// The discrepancy functional
//
//   L(x_1..x_T) = sup_{I in [0,1)} | #{n : {x_n} in I} - T |I| |
//
// over all intervals I (open, closed, half-open, degenerate), and the
// Erdos-Turan bound  L <= T/(G+1) + C sum_{k<=G} |sum_n e(k x_n)| / k,
// C = 2 + 2/pi.
//
// The count is piecewise constant with jumps at the data values, so the
// supremum is attained on one of two families:
//   excess:  closed [v_i, v_j], v_i <= v_j data values     (count - T len)
//   deficit: open (a, b), a, b in {0} u values u {1}        (T len - count)
// Both maxima reduce to a linear scan over the sorted distinct values.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "radix_approx/errors.hpp"
#include "radix_approx/exact.hpp"
#include "radix_approx/expsum.hpp"

namespace radix_approx {

struct WitnessInterval {
    Rational left;
    Rational right;
    bool left_closed = true;
    bool right_closed = true;

    std::string str() const {
        return std::string(left_closed ? "[" : "(") + left.str() + ", " + right.str() + (right_closed ? "]" : ")");
    }
    friend bool operator==(const WitnessInterval&, const WitnessInterval&) = default;
};

struct DiscrepancyReport {
    long T = 0;
    RealValue L_value;  // exact for rational points
    WitnessInterval witness;
    long G = 0;  // 0 when no Erdos-Turan evaluation was requested
    std::optional<RealValue> et_rhs;
    std::optional<RealValue> slack;
    std::optional<bool> et_holds;
};

namespace detail {

struct Cell {
    Rational value;  // representative (center for approximate points)
    Rational lo;     // enclosure
    Rational hi;
    long count = 0;
};

// Sorted distinct cells; approximate points must be certifiably ordered.
inline std::vector<Cell> sorted_cells(const std::vector<RealValue>& points) {
    std::vector<Cell> raw;
    raw.reserve(points.size());
    for (const RealValue& x : points) {
        const RealValue f = frac(x);
        raw.push_back({f.center(), f.lower(), f.upper(), 1});
    }
    std::sort(raw.begin(), raw.end(), [](const Cell& a, const Cell& b) {
        if (a.value != b.value) return a.value < b.value;
        return a.hi - a.lo < b.hi - b.lo;
    });
    std::vector<Cell> cells;
    for (Cell& c : raw) {
        if (!cells.empty()) {
            Cell& last = cells.back();
            const bool both_points = last.lo == last.hi && c.lo == c.hi;
            if (both_points && last.value == c.value) {
                ++last.count;
                continue;
            }
            if (!(last.hi < c.lo))
                throw IndeterminateError("points cannot be totally ordered at the working precision near " +
                                         c.value.str());
        }
        cells.push_back(std::move(c));
    }
    return cells;
}

struct ScanResult {
    Rational value;
    std::size_t i = 0;  // left index
    std::size_t j = 0;  // right index
};

// max_{i <= j} (A_i + B_j) (strict: i < j); among maximisers the least i, then the largest j.
inline ScanResult best_pair(const std::vector<Rational>& A, const std::vector<Rational>& B, bool strict) {
    const std::size_t n = A.size();
    // suffix maxima of B from index s, keeping the largest index on ties
    std::vector<std::size_t> arg(n);
    arg[n - 1] = n - 1;
    for (std::size_t s = n - 1; s-- > 0;) arg[s] = B[s] > B[arg[s + 1]] ? s : arg[s + 1];
    std::optional<ScanResult> best;
    for (std::size_t i = 0; i + (strict ? 1 : 0) < n; ++i) {
        const std::size_t j = arg[i + (strict ? 1 : 0)];
        Rational v = A[i] + B[j];
        if (!best || v > best->value) best = ScanResult{std::move(v), i, j};
    }
    return *best;
}

// Lower or upper bound of L from endpoint choices (exact when all cells are points).
struct Extremes {
    ScanResult excess;
    ScanResult deficit;
};

inline Extremes scan(const std::vector<Cell>& cells, long T, bool upper) {
    const Rational TT(T);
    const std::size_t s = cells.size();
    // endpoint picks that make each term largest (upper) or smallest (lower)
    auto left_end = [&](const Cell& c) { return upper ? c.hi : c.lo; };
    auto right_end = [&](const Cell& c) { return upper ? c.lo : c.hi; };

    // excess over [v_i, v_j]: (C_j - T v_j) + (T v_i - C_{i-1})
    std::vector<Rational> A(s), B(s);
    long prefix = 0;
    for (std::size_t i = 0; i < s; ++i) {
        A[i] = TT * left_end(cells[i]) - Rational(prefix);
        prefix += cells[i].count;
        B[i] = Rational(prefix) - TT * right_end(cells[i]);
    }
    ScanResult ex = best_pair(A, B, false);

    // deficit over (e_a, e_b), e = 0, v_1..v_s, 1: T e_b - #{< e_b} - (T e_a - #{<= e_a})
    std::vector<Rational> P, Q;
    P.reserve(s + 2);
    Q.reserve(s + 2);
    long below = 0;
    P.push_back(Rational(0));
    Q.push_back(Rational(0));
    // (0, b) leaves out points sitting at 0
    const bool zero_point = !cells.empty() && (upper ? cells.front().lo : cells.front().hi).sign() == 0;
    if (zero_point) P[0] = Rational(cells.front().count);
    for (std::size_t i = 0; i < s; ++i) {
        // as right endpoint: T v - #{< v}; as left endpoint: -(T v - #{<= v})
        Q.push_back(TT * left_end(cells[i]) - Rational(below));
        below += cells[i].count;
        P.push_back(Rational(below) - TT * right_end(cells[i]));
    }
    P.push_back(Rational(below) - TT);  // 1 as left endpoint: never useful, kept for index alignment
    Q.push_back(TT - Rational(below));
    // P and Q use swapped roles: A = left contribution, B = right contribution
    ScanResult de = best_pair(P, Q, true);
    return {std::move(ex), std::move(de)};
}

}  // namespace detail

/// L for a nonempty list of points, with the least attaining interval
/// (closed intervals before open ones, then left endpoint ascending, then right
/// endpoint descending).
inline DiscrepancyReport discrepancy_L(const std::vector<RealValue>& points) {
    if (points.empty()) throw DomainError("discrepancy_L expects a nonempty list of points");
    const long T = static_cast<long>(points.size());
    const std::vector<detail::Cell> cells = detail::sorted_cells(points);

    const detail::Extremes mid = [&] {
        std::vector<detail::Cell> centers = cells;
        for (auto& c : centers) c.lo = c.hi = c.value;
        return detail::scan(centers, T, false);
    }();

    DiscrepancyReport rep;
    rep.T = T;
    auto endpoint = [&](std::size_t e) {
        // deficit endpoints: 0, cells..., 1
        if (e == 0) return Rational(0);
        if (e == cells.size() + 1) return Rational(1);
        return cells[e - 1].value;
    };
    const WitnessInterval ex_w{cells[mid.excess.i].value, cells[mid.excess.j].value, true, true};
    WitnessInterval de_w{endpoint(mid.deficit.i), endpoint(mid.deficit.j), false, false};
    const bool zero_point = cells.front().value.sign() == 0 && cells.front().hi.sign() == 0;
    if (mid.deficit.i == 0 && !zero_point) de_w.left_closed = true;  // [0, b) has the same count

    // attained maxima (closed family) first, then the open family
    rep.witness = mid.excess.value >= mid.deficit.value ? ex_w : de_w;

    const bool exact = std::all_of(cells.begin(), cells.end(), [](const auto& c) { return c.lo == c.hi; });
    if (exact) {
        rep.L_value = RealValue(std::max(mid.excess.value, mid.deficit.value));
    } else {
        const detail::Extremes lo = detail::scan(cells, T, false);
        const detail::Extremes hi = detail::scan(cells, T, true);
        Precision p{};
        for (const RealValue& x : points)
            if (!x.is_exact()) p.bits = std::max(p.bits, x.precision().bits);
        rep.L_value = RealValue(Interval(std::max(lo.excess.value, lo.deficit.value),
                                         std::max(hi.excess.value, hi.deficit.value)),
                                p);
    }
    return rep;
}

namespace detail {

// x ~ num/den with den < 2^62, plus the total uncertainty (input radius and rounding).
struct ResiduePoint {
    std::uint64_t num = 0;
    std::uint64_t den = 1;
    Rational radius;
};

inline ResiduePoint residue_point(const RealValue& x) {
    const Rational f = frac(x.center());
    const auto den = to_u64(f.den());
    if (den && *den < (std::uint64_t{1} << 62)) return {*to_u64(f.num()), *den, x.radius()};
    constexpr std::uint64_t scale = std::uint64_t{1} << 60;
    const Integer n = (f * Rational(from_u64(scale))).floor();
    return {*to_u64(n), scale, x.radius() + Rational(Integer(1), from_u64(scale))};
}

}  // namespace detail

/// Same, from pre-reduced points.
inline RealValue point_exp_sum_modulus(const std::vector<detail::ResiduePoint>& points, long k, Precision p = {}) {
    if (k < 1) throw DomainError("point_exp_sum_modulus expects k >= 1");
    detail::PairwiseSum acc;
    constexpr long double uL = std::numeric_limits<long double>::epsilon() / 2;
    Rational spread(0);
    for (const auto& x : points) {
        const auto res = static_cast<std::uint64_t>(static_cast<unsigned __int128>(x.num) * static_cast<std::uint64_t>(k) % x.den);
        const long double f = (2 * static_cast<unsigned __int128>(res) >= x.den)
                                  ? -static_cast<long double>(x.den - res) / static_cast<long double>(x.den)
                                  : static_cast<long double>(res) / static_cast<long double>(x.den);
        acc.push(detail::unit_root(f));
        spread += x.radius;
    }
    const long double n = static_cast<long double>(points.size());
    const long double depth = std::ceil(std::log2(n + 1)) + 1;
    // |e(x) - e(x')| <= 2 pi |x - x'|
    const Rational radius =
        detail::from_long_double(n * (16 * uL + 2 * depth * uL) * (1 + 1e-6L)) + Rational(7 * k) * spread;
    const detail::LdComplex s = acc.total();
    return detail::modulus(RealValue::approximate(detail::from_long_double(s.re), radius, p),
                           RealValue::approximate(detail::from_long_double(s.im), radius, p), p);
}

/// |sum_n e(k x_n)| enclosed, for k >= 1.
inline RealValue point_exp_sum_modulus(const std::vector<RealValue>& points, long k, Precision p = {}) {
    std::vector<detail::ResiduePoint> rp;
    rp.reserve(points.size());
    for (const RealValue& x : points) rp.push_back(detail::residue_point(x));
    return point_exp_sum_modulus(rp, k, p);
}

/// C = 2 + 2/pi, enclosed.
inline Interval erdos_turan_constant(Precision p = {}) {
    const Interval pi = pi_interval(Precision{p.bits + 16});
    return (Interval::point(Rational(2)) + Interval::point(Rational(2)) / pi).rounded(p);
}

/// L together with T/(G+1) + C sum_{k<=G} |sum_n e(k x_n)|/k; the inequality
/// is accepted when L does not exceed the upward-rounded right-hand side.
inline DiscrepancyReport erdos_turan_check(const std::vector<RealValue>& points, long G, Precision p = {}) {
    if (G < 1) throw DomainError("erdos_turan_check expects G >= 1");
    DiscrepancyReport rep = discrepancy_L(points);
    rep.G = G;
    const Precision w{p.bits + 16};
    std::vector<detail::ResiduePoint> rp;
    rp.reserve(points.size());
    for (const RealValue& x : points) rp.push_back(detail::residue_point(x));
    Interval weighted = Interval::point(Rational(0));
    for (long k = 1; k <= G; ++k)
        weighted = weighted + point_exp_sum_modulus(rp, k, w).enclosure() / Interval::point(Rational(k));
    const Interval rhs =
        (Interval::point(Rational(rep.T, G + 1)) + erdos_turan_constant(w) * weighted.rounded(w)).rounded(p);
    rep.et_rhs = RealValue(rhs, p);
    rep.slack = *rep.et_rhs - rep.L_value;
    rep.et_holds = rep.L_value.upper() <= rhs.hi();
    if (!*rep.et_holds)
        throw InvariantViolation("discrepancy exceeds the Erdos-Turan bound",
                                 "T=" + std::to_string(rep.T) + " G=" + std::to_string(G) + " L=" + rep.L_value.str());
    return rep;
}

/// {n gamma} for n = 1..T.
inline std::vector<RealValue> kronecker_points(const RealValue& gamma, long T) {
    if (T < 1) throw DomainError("kronecker_points expects T >= 1");
    std::vector<RealValue> out;
    out.reserve(static_cast<std::size_t>(T));
    for (long n = 1; n <= T; ++n) out.push_back(gamma * RealValue(n));
    return out;
}

}  // namespace radix_approx
