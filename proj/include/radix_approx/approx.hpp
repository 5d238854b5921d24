#pragma once

// Witness-producing approximation of gamma by fractions with structured
// denominators: exhaustive minimisation of ||gamma n||, the constructive
// pigeonhole argument over repunits, and the transfer from DbStar witnesses
// back to Db witnesses.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "radix_approx/digitsets.hpp"
#include "radix_approx/errors.hpp"
#include "radix_approx/exact.hpp"

namespace radix_approx {

enum class Mode { Exact, Approximate };

inline const char* to_string(Mode m) { return m == Mode::Exact ? "exact" : "approximate"; }

struct ApproxResult {
    Integer witness;
    RealValue distance;
    SetSpec set;
    Integer N;
    std::optional<Rational> guarantee;
    Mode mode = Mode::Exact;
};

struct SearchOptions {
    unsigned threads = 1;
    std::uint64_t cap = kDefaultEnumerationCap;
};

inline RealValue scaled(const RealValue& gamma, const Integer& n) { return gamma * RealValue(Rational(n)); }

inline RealValue distance_of(const RealValue& gamma, const Integer& n) {
    return dist_to_nearest_int(scaled(gamma, n));
}

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    const std::uint64_t s = a + b;  // a, b < m < 2^63
    return s >= m ? s - m : s;
}

// Number of Db elements in [1, upper].
inline Integer count_Db_upto(Base b, const Integer& upper) {
    if (sgn(upper) < 1) return 0;
    const auto digits = to_digits(b, upper).digits;
    Integer count = 0;
    for (std::size_t j = digits.size(); j-- > 0;) {
        if (digits[j] > 1) {
            Integer ones;
            mpz_setbit(ones.get_mpz_t(), j + 1);
            return count * ipow(2, static_cast<unsigned long>(j + 1)) + ones - 1;
        }
        count = count * 2 + digits[j];
    }
    return count;
}

struct Candidate {
    std::uint64_t scaled_distance;  // ||gamma n|| * q
    std::uint64_t index;
};

}  // namespace detail

/// Reference search: plain enumeration and exact/interval arithmetic, one thread.
inline ApproxResult oracle_min_reference(const RealValue& gamma, const SetSpec& spec, const Integer& N,
                                         std::uint64_t cap = kDefaultEnumerationCap) {
    if (sgn(N) < 1) throw DomainError("oracle_min expects N >= 1");
    auto stream = enum_set(spec, {N, cap});

    std::optional<Integer> best_n;
    RealValue best_d;
    // Approximate mode: the argmin is certified only if the winner's upper bound
    // lies strictly below every other candidate's lower bound.
    std::optional<Rational> lowest_lo, second_lo;
    std::optional<Integer> lowest_lo_n;

    stream.for_each([&](const Integer& n) {
        if (sgn(n) < 1) return;
        RealValue d = distance_of(gamma, n);
        if (gamma.is_exact()) {
            if (!best_n || d.exact() < best_d.exact()) {
                best_n = n;
                best_d = std::move(d);
            }
            return;
        }
        if (!best_n || d.upper() < best_d.upper()) {
            best_n = n;
            best_d = d;
        }
        const Rational lo = d.lower();
        if (!lowest_lo || lo < *lowest_lo) {
            second_lo = lowest_lo;
            lowest_lo = lo;
            lowest_lo_n = n;
        } else if (!second_lo || lo < *second_lo) {
            second_lo = lo;
        }
    });
    if (!best_n) throw DomainError(spec.tag() + " has no element in [1, " + N.get_str() + "]");

    if (!gamma.is_exact()) {
        const std::optional<Rational>& rival = (*lowest_lo_n == *best_n) ? second_lo : lowest_lo;
        if (rival && *rival <= best_d.upper())
            throw IndeterminateError("argmin of ||gamma n|| is not certified at the working precision");
    }
    return {*best_n, best_d, spec, N, std::nullopt, gamma.is_exact() ? Mode::Exact : Mode::Approximate};
}

/// Fast path for rational gamma with a 63-bit denominator over Db or Dbr:
/// residues b_i mod q assembled from the bits of i, sharded over threads.
/// Returns nullopt when the inputs fall outside the fast path.
inline std::optional<ApproxResult> oracle_min_indexed(const RealValue& gamma, const SetSpec& spec, const Integer& N,
                                                      const SearchOptions& opt = {}) {
    if (!gamma.is_exact()) return std::nullopt;
    if (spec.kind != SetKind::Db && spec.kind != SetKind::Dbr) return std::nullopt;
    const Rational& g = gamma.exact();
    const auto q64 = to_u64(g.den());
    if (!q64 || *q64 >= (std::uint64_t{1} << 62)) return std::nullopt;
    const std::uint64_t q = *q64;
    const std::uint64_t p = *to_u64(floor_mod(g.num(), g.den()));

    Integer count = detail::count_Db_upto(spec.base, N);
    if (spec.kind == SetKind::Dbr) count = std::min(count, Integer(ipow(2, static_cast<unsigned long>(spec.r + 1)) - 1));
    if (sgn(count) < 1) throw DomainError(spec.tag() + " has no element in [1, " + N.get_str() + "]");
    if (count > from_u64(opt.cap))
        throw ResourceLimitError("search over " + count.get_str() + " elements exceeds the cap of " + std::to_string(opt.cap));
    const std::uint64_t last = *to_u64(count);

    // c[j] = b^j * p mod q
    std::vector<std::uint64_t> c;
    {
        std::uint64_t pw = 1 % q;
        const std::uint64_t bq = static_cast<std::uint64_t>(spec.base.value()) % q;
        for (std::uint64_t i = last; i > 0; i >>= 1) {
            c.push_back(detail::mulmod(pw, p, q));
            pw = detail::mulmod(pw, bq, q);
        }
    }

    auto scan = [&](std::uint64_t from, std::uint64_t to) {
        detail::Candidate best{~std::uint64_t{0}, 0};
        for (std::uint64_t i = from; i <= to; ++i) {
            std::uint64_t res = 0;
            for (std::uint64_t bits = i; bits != 0; bits &= bits - 1)
                res = detail::addmod(res, c[static_cast<std::size_t>(__builtin_ctzll(bits))], q);
            const std::uint64_t d = std::min(res, q - res);
            if (d < best.scaled_distance) best = {d, i};
        }
        return best;
    };

    const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(std::min<std::uint64_t>(last, 256))));
    std::vector<detail::Candidate> partial(threads);
    {
        std::vector<std::jthread> pool;
        const std::uint64_t chunk = last / threads;
        for (unsigned w = 0; w < threads; ++w) {
            const std::uint64_t from = 1 + w * chunk;
            const std::uint64_t to = (w + 1 == threads) ? last : (w + 1) * chunk;
            pool.emplace_back([&, w, from, to] { partial[w] = scan(from, to); });
        }
    }
    // Shards cover increasing index ranges, so a strict '<' keeps the smallest witness on ties.
    detail::Candidate best = partial[0];
    for (unsigned w = 1; w < threads; ++w)
        if (partial[w].scaled_distance < best.scaled_distance) best = partial[w];

    return ApproxResult{unrank_Db(spec.base, from_u64(best.index)),
                        Rational(from_u64(best.scaled_distance), from_u64(q)),
                        spec,
                        N,
                        std::nullopt,
                        Mode::Exact};
}

/// Exact minimiser of ||gamma n|| over the set restricted to [1, N]; ties go to the smallest n.
inline ApproxResult oracle_min(const RealValue& gamma, const SetSpec& spec, const Integer& N,
                               const SearchOptions& opt = {}) {
    if (sgn(N) < 1) throw DomainError("oracle_min expects N >= 1");
    if (auto fast = oracle_min_indexed(gamma, spec, N, opt)) return *fast;
    return oracle_min_reference(gamma, spec, N, opt.cap);
}

/// A Db witness with ||gamma w|| <= 1/(t(b,N)+1), found by scanning the repunits
/// 1, 1+b, ..., then by locating two repunits whose fractional parts share a bin.
inline ApproxResult pigeonhole_witness(const RealValue& gamma, Base b, const Integer& N) {
    if (sgn(N) < 1) throw DomainError("pigeonhole_witness expects N >= 1");
    const long t = t_of(b, N);
    const Rational bound(1, t + 1);
    const SetSpec spec = SetSpec::P(b, N);
    const Mode mode = gamma.is_exact() ? Mode::Exact : Mode::Approximate;
    const std::vector<Integer> repunits = enum_set(spec).collect();

    for (const Integer& u : repunits) {
        RealValue d = distance_of(gamma, u);
        switch (compare(d, bound)) {
            case Cmp::Less:
            case Cmp::Equal: return {u, std::move(d), SetSpec::Db(b), N, bound, mode};
            case Cmp::Greater: break;
            case Cmp::Indeterminate:
                throw IndeterminateError("cannot decide ||gamma u|| <= 1/(t+1) for repunit " + u.get_str());
        }
    }

    // Every fractional part lies in (1/(t+1), t/(t+1)), i.e. in one of the t-1
    // half-open bins [h/(t+1), (h+1)/(t+1)), h = 1..t-1, so two repunits collide.
    std::vector<Integer> bins;
    for (const Integer& u : repunits) {
        const Interval f = frac(scaled(gamma, u)).enclosure();
        const Integer lo = (f.lo() * Rational(t + 1)).floor();
        Integer hi = (f.hi() * Rational(t + 1)).floor();
        if (hi > t) hi = t;  // fold the point 1 into the top bin
        if (lo != hi) throw IndeterminateError("bin of {gamma u} is indeterminate for repunit " + u.get_str());
        bins.push_back(lo);
    }
    for (std::size_t i = 0; i < repunits.size(); ++i) {
        for (std::size_t j = i + 1; j < repunits.size(); ++j) {
            if (bins[i] != bins[j]) continue;
            const Integer w = repunits[j] - repunits[i];
            if (sgn(w) < 1 || w > N || !contains_Db(b, w))
                throw InvariantViolation("repunit difference left Db cap [1,N]", "w=" + w.get_str());
            RealValue d = distance_of(gamma, w);
            if (!decide_le(d, bound, "||gamma (v-u)|| <= 1/(t+1)"))
                throw InvariantViolation("pigeonhole difference misses its guarantee", "w=" + w.get_str());
            return {w, std::move(d), SetSpec::Db(b), N, bound, mode};
        }
    }
    throw InvariantViolation("pigeonhole argument found no colliding pair",
                             "b=" + std::to_string(b.value()) + " N=" + N.get_str());
}

enum class TransferBranch { InDb, TwoPowerDifference };

struct TransferResult {
    Integer n;
    RealValue distance_bound;
    TransferBranch branch;
};

/// If y = b^d - b^c (d > c >= 0), returns (d, c).
inline std::optional<std::pair<long, long>> as_two_power_difference(Base b, const Integer& y) {
    if (sgn(y) < 1) return std::nullopt;
    // y = b^c (b^(d-c) - 1): strip the factor b^c, then the rest + 1 must be a power of b.
    Integer rest = y;
    long c = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), static_cast<unsigned long>(b.value()))) {
        rest /= b.value();
        ++c;
    }
    Integer plus_one = rest + 1;
    long e = 0;
    while (plus_one > 1 && mpz_divisible_ui_p(plus_one.get_mpz_t(), static_cast<unsigned long>(b.value()))) {
        plus_one /= b.value();
        ++e;
    }
    if (plus_one != 1 || e < 1) return std::nullopt;
    return std::pair{c + e, c};
}

/// Converts a DbStar witness for gamma* = gamma/(b-1) into a Db witness for gamma.
/// `distance_star` is ||gamma* y||; the returned bound applies to ||gamma n||.
inline TransferResult transfer_witness(Base b, const Integer& y, const RealValue& distance_star) {
    const Rational bm1(b.value() - 1);
    if (sgn(y) >= 1 && contains_Db(b, y)) return {y, RealValue(bm1) * distance_star, TransferBranch::InDb};
    if (!as_two_power_difference(b, y))
        throw DomainError(y.get_str() + " is not in DbStar for b=" + std::to_string(b.value()));
    if (!mpz_divisible_ui_p(y.get_mpz_t(), static_cast<unsigned long>(b.value() - 1)))
        throw InvariantViolation("b^d - b^c is not divisible by b-1", y.get_str());
    Integer n = y / (b.value() - 1);
    if (sgn(n) < 1 || n > y || !contains_Db(b, n))
        throw InvariantViolation("(b^d - b^c)/(b-1) is not in Db", n.get_str());
    return {std::move(n), distance_star, TransferBranch::TwoPowerDifference};
}

}  // namespace radix_approx
