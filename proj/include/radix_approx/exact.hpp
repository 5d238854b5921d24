#pragma once

// Exact arithmetic kernel.
//
// Every quantity the library certifies is either an exact Rational or an
// Interval whose endpoints are dyadic rationals rounded outward to a fixed
// significand width. Transcendental values (pi, cos, log, exp) only ever
// enter through MPFR with directed rounding, so an interval always contains
// the true value and an undecidable comparison surfaces as Cmp::Indeterminate
// instead of being resolved by rounding noise.

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "radix_approx/errors.hpp"

namespace radix_approx {

using Integer = mpz_class;

inline Integer ipow(const Integer& base, unsigned long exponent) {
    Integer out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent);
    return out;
}

inline Integer floor_div(const Integer& a, const Integer& b) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Integer floor_mod(const Integer& a, const Integer& b) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline std::optional<std::uint64_t> to_u64(const Integer& v) {
    static_assert(sizeof(unsigned long) == sizeof(std::uint64_t));
    if (sgn(v) < 0 || !mpz_fits_ulong_p(v.get_mpz_t())) return std::nullopt;
    return static_cast<std::uint64_t>(mpz_get_ui(v.get_mpz_t()));
}

inline Integer from_u64(std::uint64_t v) { return Integer(static_cast<unsigned long>(v)); }

/// Exact signed fraction, always in canonical form (gcd 1, positive denominator).
class Rational {
public:
    Rational() = default;
    Rational(long v) : q_(v) {}
    Rational(int v) : q_(static_cast<long>(v)) {}
    Rational(unsigned long v) : q_(v) {}
    Rational(const Integer& v) : q_(v) {}
    Rational(const Integer& num, const Integer& den) {
        if (sgn(den) == 0) throw DomainError("rational with zero denominator");
        q_ = mpq_class(num, den);
        q_.canonicalize();
    }
    explicit Rational(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

    // Exact value of a finite double.
    static Rational from_double(double v) {
        mpq_class q;
        mpq_set_d(q.get_mpq_t(), v);
        return Rational(std::move(q));
    }

    // Accepts "p", "p/q", and decimal literals such as "-1.25e-3".
    static Rational parse(std::string_view text);

    const mpq_class& raw() const { return q_; }
    Integer num() const { return q_.get_num(); }
    Integer den() const { return q_.get_den(); }

    int sign() const { return sgn(q_); }
    bool is_integer() const { return q_.get_den() == 1; }

    Integer floor() const { return floor_div(q_.get_num(), q_.get_den()); }
    Integer ceil() const {
        Integer out;
        mpz_cdiv_q(out.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
        return out;
    }

    Rational abs() const { return Rational(mpq_class(::abs(q_))); }
    double to_double() const { return q_.get_d(); }

    // "p" for integers, "p/q" otherwise.
    std::string str() const { return q_.get_str(); }
    // Always "p/q"; used for machine-readable output.
    std::string fraction_str() const {
        return q_.get_num().get_str() + "/" + q_.get_den().get_str();
    }

    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ + b.q_)); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ - b.q_)); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ * b.q_)); }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.sign() == 0) throw DomainError("division by zero");
        return Rational(mpq_class(a.q_ / b.q_));
    }
    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    mpq_class q_{0};
};

inline Rational Rational::parse(std::string_view text) {
    std::string s(text);
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    if (s.empty()) throw DomainError("empty rational literal");

    if (auto slash = s.find('/'); slash != std::string::npos) {
        Integer num, den;
        if (num.set_str(s.substr(0, slash), 10) != 0 || den.set_str(s.substr(slash + 1), 10) != 0)
            throw DomainError("malformed fraction '" + s + "'");
        return Rational(num, den);
    }

    // decimal: [sign] digits [. digits] [(e|E) [sign] digits]
    std::size_t pos = 0;
    bool negative = false;
    if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
    std::string digits;
    long scale = 0;
    bool any_digit = false;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        digits += s[pos++];
        any_digit = true;
    }
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            digits += s[pos++];
            --scale;
            any_digit = true;
        }
    }
    if (!any_digit) throw DomainError("malformed number '" + s + "'");
    if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
        ++pos;
        const std::string exp_text = s.substr(pos);
        if (exp_text.empty()) throw DomainError("malformed exponent in '" + s + "'");
        std::size_t used = 0;
        long e = 0;
        try {
            e = std::stol(exp_text, &used);
        } catch (const std::exception&) {
            throw DomainError("malformed exponent in '" + s + "'");
        }
        if (used != exp_text.size()) throw DomainError("malformed exponent in '" + s + "'");
        scale += e;
        pos = s.size();
    }
    if (pos != s.size()) throw DomainError("trailing characters in '" + s + "'");

    Integer mantissa(digits, 10);
    if (negative) mantissa = -mantissa;
    if (scale >= 0) return Rational(Integer(mantissa * ipow(10, static_cast<unsigned long>(scale))));
    return Rational(mantissa, ipow(10, static_cast<unsigned long>(-scale)));
}

/// Significand width used for approximate values.
struct Precision {
    unsigned bits = 128;
};

namespace detail {

class Mpfr {
public:
    explicit Mpfr(Precision p) { mpfr_init2(v_, static_cast<mpfr_prec_t>(p.bits)); }
    ~Mpfr() { mpfr_clear(v_); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

    void set(const Rational& r, mpfr_rnd_t rnd) { mpfr_set_q(v_, r.raw().get_mpq_t(), rnd); }
    Rational value() const {
        mpq_class q;
        mpfr_get_q(q.get_mpq_t(), v_);
        return Rational(std::move(q));
    }

private:
    mpfr_t v_;
};

using UnaryMpfr = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);

// fn is increasing: rounding the argument and the result the same way keeps
// the bound on the requested side.
inline Rational eval_rounded(UnaryMpfr fn, const Rational& x, mpfr_rnd_t rnd, Precision p) {
    Mpfr arg(Precision{p.bits + 64});
    arg.set(x, rnd);
    Mpfr out(p);
    fn(out.get(), arg.get(), rnd);
    return out.value();
}

}  // namespace detail

inline Rational round_down(const Rational& x, Precision p) {
    detail::Mpfr m(p);
    m.set(x, MPFR_RNDD);
    return m.value();
}

inline Rational round_up(const Rational& x, Precision p) {
    detail::Mpfr m(p);
    m.set(x, MPFR_RNDU);
    return m.value();
}

/// Closed interval [lo, hi] with exact rational endpoints.
class Interval {
public:
    Interval() = default;
    Interval(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
        if (hi_ < lo_) throw DomainError("interval with lo > hi");
    }
    static Interval point(const Rational& v) { return Interval(v, v); }

    const Rational& lo() const { return lo_; }
    const Rational& hi() const { return hi_; }
    Rational center() const { return (lo_ + hi_) / Rational(2); }
    Rational radius() const { return (hi_ - lo_) / Rational(2); }
    Rational width() const { return hi_ - lo_; }
    bool is_point() const { return lo_ == hi_; }
    bool contains(const Rational& v) const { return lo_ <= v && v <= hi_; }

    // Outward rounding of both endpoints to a p-bit significand.
    Interval rounded(Precision p) const { return Interval(round_down(lo_, p), round_up(hi_, p)); }

    friend Interval operator+(const Interval& a, const Interval& b) { return {a.lo_ + b.lo_, a.hi_ + b.hi_}; }
    friend Interval operator-(const Interval& a, const Interval& b) { return {a.lo_ - b.hi_, a.hi_ - b.lo_}; }
    friend Interval operator*(const Interval& a, const Interval& b) {
        Rational c[4] = {a.lo_ * b.lo_, a.lo_ * b.hi_, a.hi_ * b.lo_, a.hi_ * b.hi_};
        return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
    }
    friend Interval operator/(const Interval& a, const Interval& b) {
        if (b.contains(Rational(0))) throw DomainError("interval division by an interval containing zero");
        return a * Interval(Rational(1) / b.hi_, Rational(1) / b.lo_);
    }
    Interval operator-() const { return {-hi_, -lo_}; }

    friend bool operator==(const Interval& a, const Interval& b) = default;

private:
    Rational lo_;
    Rational hi_;
};

// Enclosures of elementary functions. All results are rounded outward.

inline Interval pi_interval(Precision p) {
    detail::Mpfr lo(p), hi(p);
    mpfr_const_pi(lo.get(), MPFR_RNDD);
    mpfr_const_pi(hi.get(), MPFR_RNDU);
    return {lo.value(), hi.value()};
}

namespace detail {
// Enclosure of an increasing function on x.
inline Interval increasing(UnaryMpfr fn, const Interval& x, Precision p) {
    return {eval_rounded(fn, x.lo(), MPFR_RNDD, p), eval_rounded(fn, x.hi(), MPFR_RNDU, p)};
}
}  // namespace detail

inline Interval sqrt(const Interval& x, Precision p) {
    if (x.lo().sign() < 0) throw DomainError("sqrt of an interval reaching below zero");
    return detail::increasing(mpfr_sqrt, x, p);
}

inline Interval log(const Interval& x, Precision p) {
    if (x.lo().sign() <= 0) throw DomainError("log of a non-positive interval");
    return detail::increasing(mpfr_log, x, p);
}

inline Interval exp(const Interval& x, Precision p) { return detail::increasing(mpfr_exp, x, p); }

// base^exponent for a strictly positive base.
inline Interval pow(const Interval& base, const Interval& exponent, Precision p) {
    return exp((exponent * log(base, p)).rounded(p), p);
}

// cos(pi * d) for d inside [0, 1/2], where cos(pi d) is decreasing.
inline Interval cos_pi_on_half_period(const Interval& d, Precision p) {
    if (d.lo().sign() < 0 || d.hi() > Rational(1, 2))
        throw DomainError("cos_pi_on_half_period expects an argument in [0, 1/2]");
    const Interval arg = (pi_interval(Precision{p.bits + 32}) * d).rounded(Precision{p.bits + 32});
    detail::Mpfr a(Precision{p.bits + 32});
    detail::Mpfr v(p);
    a.set(arg.hi(), MPFR_RNDU);
    mpfr_cos(v.get(), a.get(), MPFR_RNDD);
    Rational lo = v.value();
    a.set(arg.lo(), MPFR_RNDD);
    mpfr_cos(v.get(), a.get(), MPFR_RNDU);
    Rational hi = v.value();
    return {std::move(lo), std::move(hi)};
}

enum class Cmp { Less, Equal, Greater, Indeterminate };

/// A real number: exact rational, or an interval known to contain it.
class RealValue {
public:
    RealValue() : v_(Rational(0)) {}
    RealValue(Rational v) : v_(std::move(v)) {}
    RealValue(long v) : v_(Rational(v)) {}
    RealValue(int v) : v_(Rational(v)) {}
    RealValue(Interval v, Precision p) : v_(Approx{v.rounded(p), p}) {}

    static RealValue approximate(const Rational& center, const Rational& radius, Precision p) {
        if (radius.sign() < 0) throw DomainError("negative error radius");
        return RealValue(Interval(center - radius, center + radius), p);
    }

    bool is_exact() const { return std::holds_alternative<Rational>(v_); }

    const Rational& exact() const {
        if (!is_exact()) throw DomainError("exact value requested from an approximate RealValue");
        return std::get<Rational>(v_);
    }

    Interval enclosure() const {
        if (is_exact()) return Interval::point(std::get<Rational>(v_));
        return std::get<Approx>(v_).iv;
    }

    Precision precision() const { return is_exact() ? Precision{} : std::get<Approx>(v_).prec; }

    Rational lower() const { return is_exact() ? exact() : std::get<Approx>(v_).iv.lo(); }
    Rational upper() const { return is_exact() ? exact() : std::get<Approx>(v_).iv.hi(); }
    Rational center() const { return is_exact() ? exact() : std::get<Approx>(v_).iv.center(); }
    Rational radius() const { return is_exact() ? Rational(0) : std::get<Approx>(v_).iv.radius(); }
    double to_double() const { return center().to_double(); }

    std::string str() const {
        if (is_exact()) return exact().str();
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g +/- %.3g", to_double(), radius().to_double());
        return buf;
    }

    friend bool operator==(const RealValue& a, const RealValue& b) {
        return a.is_exact() == b.is_exact() && a.lower() == b.lower() && a.upper() == b.upper();
    }

private:
    struct Approx {
        Interval iv;
        Precision prec;
    };
    std::variant<Rational, Approx> v_;
};

inline Precision common_precision(const RealValue& a, const RealValue& b) {
    if (a.is_exact()) return b.precision();
    if (b.is_exact()) return a.precision();
    return Precision{std::max(a.precision().bits, b.precision().bits)};
}

inline RealValue operator+(const RealValue& a, const RealValue& b) {
    if (a.is_exact() && b.is_exact()) return a.exact() + b.exact();
    return RealValue(a.enclosure() + b.enclosure(), common_precision(a, b));
}

inline RealValue operator-(const RealValue& a, const RealValue& b) {
    if (a.is_exact() && b.is_exact()) return a.exact() - b.exact();
    return RealValue(a.enclosure() - b.enclosure(), common_precision(a, b));
}

inline RealValue operator*(const RealValue& a, const RealValue& b) {
    if (a.is_exact() && b.is_exact()) return a.exact() * b.exact();
    return RealValue(a.enclosure() * b.enclosure(), common_precision(a, b));
}

inline Cmp compare(const RealValue& a, const RealValue& b) {
    if (a.is_exact() && b.is_exact()) {
        const auto c = a.exact() <=> b.exact();
        return c < 0 ? Cmp::Less : (c > 0 ? Cmp::Greater : Cmp::Equal);
    }
    const Interval x = a.enclosure();
    const Interval y = b.enclosure();
    if (x.hi() < y.lo()) return Cmp::Less;
    if (x.lo() > y.hi()) return Cmp::Greater;
    if (x.is_point() && y.is_point() && x.lo() == y.lo()) return Cmp::Equal;
    return Cmp::Indeterminate;
}

// a <= b, or IndeterminateError if the enclosures overlap without deciding it.
inline bool decide_le(const RealValue& a, const RealValue& b, std::string_view what) {
    const Interval x = a.enclosure();
    const Interval y = b.enclosure();
    if (x.hi() <= y.lo()) return true;
    if (x.lo() > y.hi()) return false;
    throw IndeterminateError("cannot decide " + std::string(what) + " at the working precision");
}

// a < b, or IndeterminateError.
inline bool decide_lt(const RealValue& a, const RealValue& b, std::string_view what) {
    const Interval x = a.enclosure();
    const Interval y = b.enclosure();
    if (x.hi() < y.lo()) return true;
    if (x.lo() >= y.hi()) return false;
    throw IndeterminateError("cannot decide " + std::string(what) + " at the working precision");
}

/// {x} in [0, 1).
inline Rational frac(const Rational& x) { return x - Rational(x.floor()); }

/// ||x||, the distance to the nearest integer, in [0, 1/2].
inline Rational dist_to_nearest_int(const Rational& x) {
    const Rational f = frac(x);
    const Rational g = Rational(1) - f;
    return f < g ? f : g;
}

inline RealValue frac(const RealValue& x) {
    if (x.is_exact()) return frac(x.exact());
    const Interval iv = x.enclosure();
    const Integer base = iv.lo().floor();
    // frac jumps at every integer; the enclosure must sit inside one unit cell.
    if (iv.hi() >= Rational(Integer(base + 1)))
        throw IndeterminateError("fractional part is indeterminate: enclosure reaches an integer");
    return RealValue(Interval(iv.lo() - Rational(base), iv.hi() - Rational(base)), x.precision());
}

inline RealValue dist_to_nearest_int(const RealValue& x) {
    if (x.is_exact()) return dist_to_nearest_int(x.exact());
    const Interval iv = x.enclosure();
    const Rational half(1, 2);
    Rational lo = std::min(dist_to_nearest_int(iv.lo()), dist_to_nearest_int(iv.hi()));
    Rational hi = std::max(dist_to_nearest_int(iv.lo()), dist_to_nearest_int(iv.hi()));
    // Interior extrema of the tent function: an integer (0) or a half-integer (1/2).
    if (Rational(iv.lo().ceil()) <= iv.hi()) lo = Rational(0);
    if (Rational((iv.lo() - half).ceil()) <= iv.hi() - half) hi = half;
    return RealValue(Interval(std::move(lo), std::move(hi)), x.precision());
}

/// (1 - pi ||x||^2) - |cos(pi x)|; non-negative for every real x.
///
/// |cos(pi x)| is evaluated as cos(pi ||x||): the reduction x -> ||x|| is exact,
/// and cos is monotone on [0, pi/2], so the enclosure is rigorous.
inline RealValue cos_bound_margin(const RealValue& x, Precision p = {}) {
    const Interval d = dist_to_nearest_int(x).enclosure();
    const Precision work{p.bits + 16};
    const Interval pi = pi_interval(work);
    const Interval poly = Interval::point(Rational(1)) - pi * (d * d);
    Interval c = cos_pi_on_half_period(d, work);
    if (c.lo().sign() < 0) c = Interval(Rational(0), std::max(c.hi(), Rational(0)));
    return RealValue((poly - c).rounded(p), p);
}

/// Parses a real-number literal.
///
///   p/q, integer, decimal           exact
///   sqrt2, pi, e, sqrtN             enclosure at precision p
///   <value>+-<radius>               declared input uncertainty
inline RealValue parse_real(std::string_view text, Precision p = {}) {
    std::string s(text);
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    if (s.empty()) throw DomainError("empty real literal");

    for (std::string_view sep : {"+-", "\xC2\xB1"}) {
        if (auto at = s.find(sep); at != std::string::npos && at > 0) {
            const RealValue center = parse_real(s.substr(0, at), p);
            const Rational radius = Rational::parse(s.substr(at + sep.size()));
            if (radius.sign() < 0) throw DomainError("negative uncertainty radius");
            const Interval c = center.enclosure();
            return RealValue(Interval(c.lo() - radius, c.hi() + radius), p);
        }
    }

    bool negative = false;
    std::string body = s;
    if (body[0] == '-') {
        negative = true;
        body = body.substr(1);
    }
    auto signed_iv = [&](Interval iv) { return RealValue(negative ? -iv : iv, p); };

    if (body == "pi") return signed_iv(pi_interval(p));
    if (body == "e") return signed_iv(exp(Interval::point(Rational(1)), p));
    if (body.rfind("sqrt", 0) == 0 && body.size() > 4) {
        Integer radicand;
        if (radicand.set_str(body.substr(4), 10) != 0 || sgn(radicand) < 0)
            throw DomainError("malformed sqrt literal '" + s + "'");
        if (mpz_perfect_square_p(radicand.get_mpz_t())) {
            Integer root;
            mpz_sqrt(root.get_mpz_t(), radicand.get_mpz_t());
            return negative ? Rational(Integer(-root)) : Rational(root);
        }
        return signed_iv(sqrt(Interval::point(Rational(radicand)), p));
    }
    return Rational::parse(s);
}

}  // namespace radix_approx
