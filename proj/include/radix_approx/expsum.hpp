#pragma once

// Exponential sums over digit-restricted sets.
//
//   S(b, r, k, gamma) = sum_{j in Dbr(r)} e(k j gamma),   e(x) = exp(2 pi i x)
//
// The sum is evaluated term by term. Each exponent k j gamma is reduced mod 1
// exactly (integer residues mod the denominator of gamma), then mapped to an
// angle in [-pi, pi] and evaluated in extended precision. Terms are summed
// in a fixed pairwise tree over j's bit pattern, so the result does not depend
// on how many threads share the work.
//
// The factorisation 1 + e(x) = 2 cos(pi x) e(x/2) gives
//   |S| = 2^(r+1) prod_d |cos(pi k b^d gamma)|,
// with the pi inside the cosine (the factor is e(x/2) + e(-x/2)).

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "radix_approx/digitsets.hpp"
#include "radix_approx/errors.hpp"
#include "radix_approx/exact.hpp"

namespace radix_approx {

struct ComplexValue {
    RealValue re;
    RealValue im;
};

struct ExpSumReport {
    long b = 2;
    long r = 0;
    long k = 1;
    RealValue gamma;
    bool exclude_zero = false;
    std::uint64_t terms = 0;
    ComplexValue value;               // the evaluated sum (j = 0 dropped if exclude_zero)
    RealValue magnitude;              // |value|
    RealValue full_magnitude;         // |sum over all of Dbr(r)|
    RealValue product_magnitude;      // 2^(r+1) prod_d |cos(pi k b^d gamma)|
    RealValue cosine_bound;          // 2^(r+1) prod_d (1 - pi ||k b^d gamma||^2)
    std::optional<RealValue> decay_bound;
    std::optional<Rational> hypothesis_beta;
    std::optional<std::vector<long>> V_set;
};

inline constexpr double kBoundTolerance = 1e-9;

struct ExpSumOptions {
    long max_r = 26;
    unsigned threads = 1;
    Precision precision{};
    Rational tolerance{1, 1000000000};  // slack allowed on bound checks (kBoundTolerance)
};

/// ||k b^d gamma|| for d = 0..r.
inline std::vector<RealValue> shift_distances(Base b, long r, long k, const RealValue& gamma) {
    std::vector<RealValue> out;
    out.reserve(static_cast<std::size_t>(r + 1));
    Integer mult = k;
    for (long d = 0; d <= r; ++d) {
        out.push_back(dist_to_nearest_int(gamma * RealValue(Rational(mult))));
        mult *= b.value();
    }
    return out;
}

namespace detail {

struct LdComplex {
    long double re = 0;
    long double im = 0;
};

inline LdComplex operator+(const LdComplex& a, const LdComplex& b) { return {a.re + b.re, a.im + b.im}; }

// Binary-counter pairwise summation; over 2^n pushes it forms a perfect tree.
class PairwiseSum {
public:
    void push(LdComplex v) {
        int lv = 0;
        while (size_ > 0 && level_[size_ - 1] == lv) {
            v = stack_[--size_] + v;
            ++lv;
        }
        stack_[size_] = v;
        level_[size_++] = lv;
    }
    LdComplex total() const {
        if (size_ == 0) return {};
        LdComplex acc = stack_[size_ - 1];
        for (std::size_t i = size_ - 1; i-- > 0;) acc = stack_[i] + acc;
        return acc;
    }

private:
    std::array<LdComplex, 72> stack_{};
    std::array<int, 72> level_{};
    std::size_t size_ = 0;
};

inline const long double kTwoPi = 6.283185307179586476925286766559005768L;

// e(f) for f in [-1/2, 1/2].
inline LdComplex unit_root(long double f) {
    const long double theta = kTwoPi * f;
    return {std::cos(theta), std::sin(theta)};
}

// Residues of k j gamma_num mod q for 63-bit q, walked in increasing j-mask order.
class U64Residues {
public:
    U64Residues(Base b, long r, const Integer& kp, std::uint64_t q) : q_(q) {
        const Integer qq = from_u64(q);
        Integer pw = floor_mod(kp, qq);
        prefix_.push_back(0);
        for (long d = 0; d <= r; ++d) {
            c_.push_back(*to_u64(pw));
            prefix_.push_back(add(prefix_.back(), c_.back()));
            pw = floor_mod(Integer(pw * b.value()), qq);
        }
    }
    std::uint64_t of_mask(std::uint64_t mask) const {
        std::uint64_t res = 0;
        for (; mask != 0; mask &= mask - 1) res = add(res, c_[static_cast<std::size_t>(__builtin_ctzll(mask))]);
        return res;
    }
    // residue of mask+1 given the residue of mask
    std::uint64_t step(std::uint64_t res, std::uint64_t next_mask) const {
        const auto z = static_cast<std::size_t>(__builtin_ctzll(next_mask));
        return add(sub(res, prefix_[z]), c_[z]);
    }
    long double fraction(std::uint64_t res) const {
        const long double num = (2 * static_cast<unsigned __int128>(res) >= q_)
                                    ? -static_cast<long double>(q_ - res)
                                    : static_cast<long double>(res);
        return num / static_cast<long double>(q_);
    }
    static constexpr bool kExtendedFraction = true;

private:
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        const std::uint64_t s = a + b;
        return s >= q_ ? s - q_ : s;
    }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + (q_ - b); }

    std::uint64_t q_;
    std::vector<std::uint64_t> c_;
    std::vector<std::uint64_t> prefix_;
};

// Same walk with arbitrary-size residues.
class BigResidues {
public:
    BigResidues(Base b, long r, const Integer& kp, Integer q) : q_(std::move(q)) {
        Integer pw = floor_mod(kp, q_);
        prefix_.push_back(0);
        for (long d = 0; d <= r; ++d) {
            c_.push_back(pw);
            prefix_.push_back(floor_mod(Integer(prefix_.back() + pw), q_));
            pw = floor_mod(Integer(pw * b.value()), q_);
        }
    }
    Integer of_mask(std::uint64_t mask) const {
        Integer res = 0;
        for (; mask != 0; mask &= mask - 1) res += c_[static_cast<std::size_t>(__builtin_ctzll(mask))];
        return floor_mod(res, q_);
    }
    Integer step(const Integer& res, std::uint64_t next_mask) const {
        const auto z = static_cast<std::size_t>(__builtin_ctzll(next_mask));
        return floor_mod(Integer(res - prefix_[z] + c_[z]), q_);
    }
    long double fraction(const Integer& res) const {
        Integer num = res;
        if (2 * res >= q_) num -= q_;
        return static_cast<long double>(mpq_class(num, q_).get_d());
    }
    static constexpr bool kExtendedFraction = false;

private:
    Integer q_;
    std::vector<Integer> c_;
    std::vector<Integer> prefix_;
};

template <class Residues>
LdComplex block_sum(const Residues& res, std::uint64_t from, std::uint64_t count, bool exclude_zero) {
    PairwiseSum acc;
    auto cur = res.of_mask(from);
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::uint64_t mask = from + i;
        if (i > 0) cur = res.step(cur, mask);
        if (mask == 0 && exclude_zero)
            acc.push({0, 0});
        else
            acc.push(unit_root(res.fraction(cur)));
    }
    return acc.total();
}

template <class Residues>
LdComplex tree_sum(const Residues& res, long r, bool exclude_zero, unsigned threads) {
    const std::uint64_t total = std::uint64_t{1} << (r + 1);
    std::uint64_t blocks = 1;
    while (blocks * 2 <= threads && blocks * 2 <= total) blocks *= 2;
    const std::uint64_t size = total / blocks;
    std::vector<LdComplex> parts(blocks);
    if (blocks == 1) {
        parts[0] = block_sum(res, 0, size, exclude_zero);
    } else {
        std::vector<std::jthread> pool;
        for (std::uint64_t w = 0; w < blocks; ++w)
            pool.emplace_back([&, w] { parts[w] = block_sum(res, w * size, size, exclude_zero); });
    }
    PairwiseSum top;
    for (const auto& p : parts) top.push(p);
    return top.total();
}

// Exact value of a long double as a Rational.
inline Rational from_long_double(long double x) {
    const double hi = static_cast<double>(x);
    const double lo = static_cast<double>(x - static_cast<long double>(hi));
    return Rational::from_double(hi) + Rational::from_double(lo);
}

// Enclosure of |z| for z in [re] x [im]; both components are centred boxes.
inline RealValue modulus(const RealValue& re, const RealValue& im, Precision p) {
    const Interval x = re.enclosure();
    const Interval y = im.enclosure();
    auto sq_lo = [](const Interval& v) {
        if (v.contains(Rational(0))) return Rational(0);
        const Rational m = std::min(v.lo().abs(), v.hi().abs());
        return m * m;
    };
    auto sq_hi = [](const Interval& v) {
        const Rational m = std::max(v.lo().abs(), v.hi().abs());
        return m * m;
    };
    return RealValue(sqrt(Interval(sq_lo(x) + sq_lo(y), sq_hi(x) + sq_hi(y)).rounded(p), p), p);
}

}  // namespace detail

/// Direct evaluation of sum_{j in Dbr(r)} e(k j gamma) with the product identity and
/// the cosine-inequality bound alongside.
inline ExpSumReport eval_expsum(Base b, long r, long k, const RealValue& gamma, bool exclude_zero,
                                const ExpSumOptions& opt = {}) {
    if (r < 0) throw DomainError("eval_expsum expects r >= 0");
    if (r > opt.max_r || r > 60)
        throw ResourceLimitError("r = " + std::to_string(r) + " exceeds the term cap r <= " + std::to_string(opt.max_r));
    const Precision p = opt.precision;

    ExpSumReport rep;
    rep.b = b.value();
    rep.r = r;
    rep.k = k;
    rep.gamma = gamma;
    rep.exclude_zero = exclude_zero;
    const std::uint64_t n_all = std::uint64_t{1} << (r + 1);
    rep.terms = exclude_zero ? n_all - 1 : n_all;

    // Direct sum from the exactly reduced center of gamma.
    const Rational center = gamma.center();
    const Integer kp = Integer(k) * center.num();
    detail::LdComplex sum;
    long double term_error = 0;
    constexpr long double uL = std::numeric_limits<long double>::epsilon() / 2;
    constexpr long double uD = std::numeric_limits<double>::epsilon() / 2;
    const auto q64 = to_u64(center.den());
    if (q64 && *q64 < (std::uint64_t{1} << 62)) {
        sum = detail::tree_sum(detail::U64Residues(b, r, kp, *q64), r, exclude_zero, opt.threads);
        term_error = 16 * uL;
    } else {
        sum = detail::tree_sum(detail::BigResidues(b, r, kp, center.den()), r, exclude_zero, opt.threads);
        term_error = 8 * uD + 16 * uL;
    }

    // A-priori radius per component: per-term angle and libm error (sinl/cosl
    // assumed within 2 ulp) plus first-order pairwise summation error.
    const long double n = static_cast<long double>(n_all);
    const long double depth = static_cast<long double>(r + 1);
    Rational radius = detail::from_long_double(n * (term_error + 2 * depth * uL) * (1 + 1e-6L));
    if (!gamma.is_exact()) {
        // |e(x) - e(x')| <= 2 pi |x - x'|, and the shift of k j gamma is |k| j rad(gamma);
        // sum_{j in Dbr(r)} j = 2^r (b^(r+1) - 1)/(b - 1).
        const Rational sum_j = Rational(Integer(ipow(2, static_cast<unsigned long>(r)) *
                                                (ipow(b.integer(), static_cast<unsigned long>(r + 1)) - 1) /
                                                (b.value() - 1)));
        radius += Rational(7) * Rational(std::labs(k)) * gamma.radius() * sum_j;
    }
    rep.value.re = RealValue::approximate(detail::from_long_double(sum.re), radius, p);
    rep.value.im = RealValue::approximate(detail::from_long_double(sum.im), radius, p);
    rep.magnitude = detail::modulus(rep.value.re, rep.value.im, p);
    rep.full_magnitude =
        exclude_zero ? detail::modulus(rep.value.re + RealValue(1), rep.value.im, p) : rep.magnitude;

    // Product identity and bound.
    const Interval pi = pi_interval(Precision{p.bits + 16});
    Interval product = Interval::point(Rational(Integer(ipow(2, static_cast<unsigned long>(r + 1)))));
    Interval bound = product;
    for (const RealValue& dist : shift_distances(b, r, k, gamma)) {
        const Interval d = dist.enclosure();
        product = (product * cos_pi_on_half_period(d, Precision{p.bits + 16})).rounded(Precision{p.bits + 16});
        bound = (bound * (Interval::point(Rational(1)) - pi * (d * d))).rounded(Precision{p.bits + 16});
    }
    if (product.lo().sign() < 0) product = Interval(Rational(0), std::max(product.hi(), Rational(0)));
    rep.product_magnitude = RealValue(product, p);
    rep.cosine_bound = RealValue(bound, p);
    return rep;
}

struct GClass {
    std::optional<long> t;  // none iff ||y|| = 0
    friend bool operator==(const GClass&, const GClass&) = default;
};

namespace detail {
// t with 1/(2 b^t) < x <= 1/(2 b^(t-1)) for rational x in (0, 1/2].
inline long g_class_of(Base b, const Rational& x) {
    // t - 1 = floor(log_b(1/(2x))); 1/(2x) = n/d >= 1.
    const Rational q = Rational(1) / (Rational(2) * x);
    const Integer n = q.num();
    const Integer d = q.den();
    long e = 0;
    for (Integer pw = Integer(b.value()) * d; pw <= n; pw *= b.value()) ++e;
    return e + 1;
}
}  // namespace detail

inline GClass classify_G(Base b, const RealValue& y) {
    const RealValue dist = dist_to_nearest_int(y);
    if (dist.is_exact()) {
        if (dist.exact().sign() == 0) return {std::nullopt};
        return {detail::g_class_of(b, dist.exact())};
    }
    const Interval iv = dist.enclosure();
    if (iv.lo().sign() == 0) throw IndeterminateError("G-class undecidable: enclosure of ||y|| reaches 0");
    const long t_lo = detail::g_class_of(b, iv.hi());
    const long t_hi = detail::g_class_of(b, iv.lo());
    if (t_lo != t_hi) throw IndeterminateError("G-class undecidable: enclosure of ||y|| straddles a class boundary");
    return {t_lo};
}

struct HypothesisResult {
    bool holds = true;
    std::optional<Integer> counterexample;  // least nonzero x in DbStarR(r) with ||gamma x|| <= beta
};

/// Whether ||gamma x|| > beta for every nonzero x in DbStarR(r).
inline HypothesisResult hypothesis_check(Base b, long r, const Rational& beta, const RealValue& gamma,
                                         std::uint64_t cap = kDefaultEnumerationCap) {
    if (r < 0) throw DomainError("hypothesis_check expects r >= 0");
    if (beta.sign() <= 0) throw DomainError("hypothesis_check expects beta > 0");
    if (r > 62) throw ResourceLimitError("hypothesis_check: r too large");

    if (gamma.is_exact()) {
        const Rational& g = gamma.exact();
        const auto q64 = to_u64(g.den());
        if (q64 && *q64 < (std::uint64_t{1} << 62)) {
            if ((std::uint64_t{1} << (r + 1)) > cap)
                throw ResourceLimitError("hypothesis_check: 2^(r+1) exceeds the enumeration cap");
            const std::uint64_t q = *q64;
            // ||gamma x|| > beta  <=>  min(res, q - res) > floor(beta q)
            const Integer thr_big = (beta * Rational(g.den())).floor();
            const std::uint64_t thr = thr_big >= g.den() ? q : *to_u64(thr_big);
            const detail::U64Residues res(b, r, g.num(), q);
            auto violates = [&](std::uint64_t rr) { return std::min(rr, q - rr) <= thr; };

            std::optional<Integer> least;
            const std::uint64_t total = std::uint64_t{1} << (r + 1);
            std::uint64_t cur = 0;
            for (std::uint64_t mask = 1; mask < total; ++mask) {
                cur = res.step(cur, mask);
                if (violates(cur)) {
                    least = unrank_Db(b, from_u64(mask));
                    break;
                }
            }
            std::vector<std::uint64_t> pow_res;  // b^d gamma_num mod q
            for (long d = 0; d <= r; ++d) pow_res.push_back(res.of_mask(std::uint64_t{1} << d));
            for (long d = 1; d <= r; ++d) {
                for (long c = 0; c < d; ++c) {
                    const std::uint64_t a = pow_res[static_cast<std::size_t>(d)];
                    const std::uint64_t s = pow_res[static_cast<std::size_t>(c)];
                    const std::uint64_t diff = a >= s ? a - s : a + (q - s);
                    if (!violates(diff)) continue;
                    Integer x = ipow(b.integer(), static_cast<unsigned long>(d)) -
                                ipow(b.integer(), static_cast<unsigned long>(c));
                    if (!least || x < *least) least = std::move(x);
                }
            }
            return {!least.has_value(), least};
        }
    }

    auto stream = enum_set(SetSpec::DbStarR(b, r), {std::nullopt, cap});
    std::optional<Integer> least;
    const RealValue beta_v(beta);
    while (auto x = stream.next()) {
        if (sgn(*x) == 0) continue;
        const Cmp c = compare(dist_to_nearest_int(gamma * RealValue(Rational(*x))), beta_v);
        if (c == Cmp::Indeterminate)
            throw IndeterminateError("cannot decide ||gamma x|| > beta for x = " + x->get_str());
        if (c != Cmp::Greater) {
            least = *x;
            break;
        }
    }
    return {!least.has_value(), least};
}

struct ShiftCount {
    long g = 0;
    std::vector<long> d_list;
    bool hypothesis_holds = false;
};

inline bool below_three_sqrt(long g, long k) { return g < 0 || static_cast<__int128>(g) * g < static_cast<__int128>(9) * k; }

/// The shifts d in 0..r with ||k b^d gamma|| <= beta; under the hypothesis of
/// hypothesis_check their number is below 3 sqrt(k).
inline ShiftCount small_shift_count(Base b, long r, long k, const RealValue& gamma, const Rational& beta,
                                    std::optional<bool> hypothesis_known = std::nullopt) {
    if (k < 1) throw DomainError("small_shift_count expects k >= 1");
    if (r < 0) throw DomainError("small_shift_count expects r >= 0");
    ShiftCount out;
    const auto dists = shift_distances(b, r, k, gamma);
    for (long d = 0; d <= r; ++d)
        if (decide_le(dists[static_cast<std::size_t>(d)], RealValue(beta), "||k b^d gamma|| <= beta"))
            out.d_list.push_back(d);
    out.g = static_cast<long>(out.d_list.size());
    out.hypothesis_holds = hypothesis_known ? *hypothesis_known : hypothesis_check(b, r, beta, gamma).holds;
    if (out.hypothesis_holds && !below_three_sqrt(out.g, k))
        throw InvariantViolation("small-shift count reached 3 sqrt(k) under the hypothesis",
                                 "b=" + std::to_string(b.value()) + " r=" + std::to_string(r) +
                                     " k=" + std::to_string(k) + " g=" + std::to_string(out.g));
    return out;
}

/// 2^(r+3) (1 - pi/(4 b^2))^((r - 3 sqrt(k) + 1)/m), enclosed.
inline RealValue decay_bound(Base b, long r, long k, long m, Precision p = {}) {
    const Precision w{p.bits + 32};
    const Interval pi = pi_interval(w);
    const Interval base = Interval::point(Rational(1)) - pi / Interval::point(Rational(4 * b.value() * b.value()));
    const Interval exponent = (Interval::point(Rational(r + 1)) - Interval::point(Rational(3)) *
                                                                      sqrt(Interval::point(Rational(k)), w)) /
                              Interval::point(Rational(m));
    const Interval scale = Interval::point(Rational(Integer(ipow(2, static_cast<unsigned long>(r + 3)))));
    return RealValue(scale * pow(base.rounded(w), exponent.rounded(w), w), p);
}

/// Checks the decay bound for the j != 0 sum under the hypothesis
/// ||gamma x|| > 1/(2 b^m) for every nonzero x in DbStarR(r).
inline ExpSumReport decay_check(Base b, long r, long k, long m, const RealValue& gamma,
                                  const ExpSumOptions& opt = {}) {
    if (m < 1 || k < 1 || r < 0) throw DomainError("decay_check expects m >= 1, k >= 1, r >= 0");
    const Rational beta = Rational(1) / Rational(Integer(2 * ipow(b.integer(), static_cast<unsigned long>(m))));
    const HypothesisResult hyp = hypothesis_check(b, r, beta, gamma);
    if (!hyp.holds)
        throw HypothesisViolation("hypothesis ||gamma x|| > 1/(2 b^m) fails on DbStarR(r)",
                                  "x=" + hyp.counterexample->get_str());

    ExpSumReport rep = eval_expsum(b, r, k, gamma, true, opt);
    rep.hypothesis_beta = beta;
    rep.decay_bound = decay_bound(b, r, k, m, opt.precision);

    std::vector<long> V;
    const auto dists = shift_distances(b, r, k, gamma);
    for (long d = 0; d <= r; ++d)
        if (!decide_le(dists[static_cast<std::size_t>(d)], RealValue(beta), "||k b^d gamma|| > 1/(2b^m)"))
            V.push_back(d);
    rep.V_set = V;

    if (rep.magnitude.upper() > rep.decay_bound->upper() + opt.tolerance)
        throw InvariantViolation("j != 0 sum exceeds the decay bound",
                                 "|sum| ~ " + rep.magnitude.str() + " bound ~ " + rep.decay_bound->str());
    // #V >= r - 3 sqrt(k) + 1  <=>  r + 1 - #V <= 3 sqrt(k)
    const long deficit = r + 1 - static_cast<long>(V.size());
    if (deficit > 0 && static_cast<__int128>(deficit) * deficit > static_cast<__int128>(9) * k)
        throw InvariantViolation("#V below r - 3 sqrt(k) + 1", "#V=" + std::to_string(V.size()));
    return rep;
}

}  // namespace radix_approx
