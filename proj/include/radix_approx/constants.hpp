#pragma once

// Effective constants behind the (log N)^-2 upper bound:
//
//   U   = 4b^2 / (4b^2 - pi)
//   C   = 2 + 2/pi
//   H_b = max_{m >= 1} (3 sqrt(8 b^m) + 2 m^2 log_U(256 C b) - 1) / b^(m/2)
//   J_b = 2 H_b
//   m_N = floor(2 log_b(t / J_b)),  t = t(b, N)
//
// and the resulting bound  min_{n <= N, n in DbStar} ||n gamma|| <= b J_b^2 / (2 t^2).
// The coarse 2 m^2 log_U(256 C b) form of the exponent is used as written
// (the sharper m log_U(256 C) + 2 m^2 log_U b would lower H_b slightly).

#include <cmath>
#include <optional>
#include <string>

#include "radix_approx/digitsets.hpp"
#include "radix_approx/discrepancy.hpp"
#include "radix_approx/errors.hpp"
#include "radix_approx/exact.hpp"

namespace radix_approx {

struct ConstantSet {
    long b = 2;
    RealValue U;
    RealValue C;
    RealValue H_b;
    RealValue J_b;
    long argmax_m = 1;
    long m_max_used = 1;
};

namespace detail {

inline Interval h_term(const Interval& three_sqrt8, const Interval& logU, long b, long m, Precision p) {
    const Interval half_power = pow(Interval::point(Rational(b)), Interval::point(Rational(m, 2)), p);
    const Interval numer = three_sqrt8 * half_power + Interval::point(Rational(2 * m * m)) * logU -
                           Interval::point(Rational(1));
    return (numer / half_power).rounded(p);
}

}  // namespace detail

inline ConstantSet compute_constants(Base b, Precision p = {}) {
    const Precision w{p.bits + 32};
    const long bv = b.value();
    const Interval pi = pi_interval(w);
    const Interval four_b2 = Interval::point(Rational(4 * bv * bv));
    const Interval U = (four_b2 / (four_b2 - pi)).rounded(w);
    const Interval C = erdos_turan_constant(w);
    const Interval logU = (log((Interval::point(Rational(256 * bv)) * C).rounded(w), w) / log(U, w)).rounded(w);
    const Interval three_sqrt8 = (Interval::point(Rational(3)) * sqrt(Interval::point(Rational(8)), w)).rounded(w);

    // f(m) = 3 sqrt 8 + (2 m^2 log_U - 1) / b^(m/2) <= 3 sqrt 8 + 2 log_U m^2 b^(-m/2),
    // and m^2 b^(-m/2) decreases once m > 4 / ln b.
    ConstantSet out;
    out.b = bv;
    Interval best = detail::h_term(three_sqrt8, logU, bv, 1, w);
    Rational best_center = best.center();
    out.argmax_m = 1;
    const double monotone_from = 4.0 / std::log(static_cast<double>(bv));
    long m = 1;
    for (;;) {
        ++m;
        if (m > 10000) throw ResourceLimitError("H_b scan did not terminate");
        const Interval f = detail::h_term(three_sqrt8, logU, bv, m, w);
        best = Interval(std::max(best.lo(), f.lo()), std::max(best.hi(), f.hi()));
        if (f.center() > best_center) {
            best_center = f.center();
            out.argmax_m = m;
        }
        if (static_cast<double>(m) > monotone_from + 1) {
            const Interval tail =
                three_sqrt8 + Interval::point(Rational(2 * m * m)) * logU /
                                  pow(Interval::point(Rational(bv)), Interval::point(Rational(m, 2)), w);
            if (tail.hi() <= best.lo()) break;
        }
    }
    out.m_max_used = m;
    out.U = RealValue(U, p);
    out.C = RealValue(C, p);
    out.H_b = RealValue(best, p);
    out.J_b = RealValue((Interval::point(Rational(2)) * best), p);
    return out;
}

struct DistanceBound {
    long b = 2;
    Integer N;
    long t = 0;
    std::optional<long> m_N;             // none when t = 0
    std::optional<RealValue> star_bound; // b J^2 / (2 t^2), over DbStar
    std::optional<RealValue> db_bound;   // (b - 1) times that, over Db
    bool vacuous = true;
};

namespace detail {
inline long floor_of(const Interval& x, std::string_view what) {
    const Integer lo = x.lo().floor();
    const Integer hi = x.hi().floor();
    if (lo != hi) throw IndeterminateError("cannot decide floor of " + std::string(what));
    return lo.get_si();
}
}  // namespace detail

/// The explicit bound as a function of N. Vacuous when t = 0, m_N < 1, or the bound is >= 1/2.
inline DistanceBound distance_bound(Base b, const Integer& N, const ConstantSet& cs, Precision p = {}) {
    if (N < 1) throw DomainError("distance_bound expects N >= 1");
    DistanceBound out;
    out.b = b.value();
    out.N = N;
    out.t = t_of(b, N);
    if (out.t == 0) return out;
    const Precision w{p.bits + 32};
    const Interval J = cs.J_b.enclosure();
    const Interval tt = Interval::point(Rational(out.t));
    const Interval ratio = (tt / J).rounded(w);
    const Interval two_log =
        (Interval::point(Rational(2)) * log(ratio, w) / log(Interval::point(Rational(b.value())), w)).rounded(w);
    out.m_N = detail::floor_of(two_log, "m_N");
    const Interval star = (Interval::point(Rational(b.value())) * J * J / (Interval::point(Rational(2)) * tt * tt));
    out.star_bound = RealValue(star, p);
    out.db_bound = RealValue(Interval::point(Rational(b.value() - 1)) * star, p);
    const bool small = decide_lt(*out.star_bound, RealValue(Rational(1, 2)), "distance bound < 1/2");
    out.vacuous = *out.m_N < 1 || !small;
    return out;
}

inline DistanceBound distance_bound(Base b, const Integer& N, Precision p = {}) {
    return distance_bound(b, N, compute_constants(b, p), p);
}

/// Smallest t(b, N) at which the bound becomes informative.
inline long first_informative_t(Base b, const ConstantSet& cs) {
    // need 2 log_b(t/J) >= 1 and b J^2 / (2 t^2) < 1/2, i.e. t >= J sqrt b and t > J sqrt b
    const double guess = cs.J_b.upper().to_double() * std::sqrt(static_cast<double>(b.value()));
    long t = std::max(1L, static_cast<long>(guess) - 2);
    const Interval J = cs.J_b.enclosure();
    const Precision w{cs.J_b.precision().bits + 32};
    for (;; ++t) {
        const Interval tt = Interval::point(Rational(t));
        const Interval star = Interval::point(Rational(b.value())) * J * J / (Interval::point(Rational(2)) * tt * tt);
        const Interval two_log =
            (Interval::point(Rational(2)) * log((tt / J).rounded(w), w) / log(Interval::point(Rational(b.value())), w))
                .rounded(w);
        if (two_log.lo() >= Rational(1) && star.hi() < Rational(1, 2)) return t;
    }
}

}  // namespace radix_approx
