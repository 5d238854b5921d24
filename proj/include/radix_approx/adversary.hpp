#pragma once

// Lower-bound construction: with T = ceil(log2(N+1)), k = ceil(T/(b-1)) + 1
// and gamma_N = 1/(b^k - 1), every one of the first N elements b_1 < b_2 < ...
// of Db satisfies ||gamma_N b_n|| >= 1/(b^k - 1) >= b^-4 N^(-log2(b)/(b-1)).
//
// Also the residue toolkit mod b^k - 1: digit-vector reduction, folding of
// power sums into A(b,k,t), and the check that sums of t powers of b avoid
// multiples of b^k - 1 when k > t/(b-1).

#include <cstdint>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "radix_approx/digitsets.hpp"
#include "radix_approx/errors.hpp"
#include "radix_approx/exact.hpp"

namespace radix_approx {

struct AdversaryCertificate {
    long b = 2;
    Integer N;
    long T = 0;
    long k = 0;
    Rational gamma_N;
    Rational min_distance;
    Integer min_witness_index;  // n, 1-based
    Integer min_witness;        // b_n
    RealValue lower_bound;      // b^-4 N^(-log2 b/(b-1))
    Rational sharper_bound;     // 1/(b^k - 1)
    bool passed = false;
};

/// b^-4 N^(-log2(b)/(b-1)), enclosed.
inline RealValue adversary_bound(Base b, const Integer& N, Precision p = {}) {
    const Precision w{p.bits + 32};
    const Interval B = Interval::point(Rational(b.value()));
    const Interval exponent = (log(B, w) / (log(Interval::point(Rational(2)), w) *
                                            Interval::point(Rational(b.value() - 1))))
                                  .rounded(w);
    const Interval decay = pow(Interval::point(Rational(N)), Interval::point(Rational(0)) - exponent, w);
    return RealValue(decay / Interval::point(Rational(Integer(ipow(b.integer(), 4)))), p);
}

inline AdversaryCertificate adversarial_gamma(Base b, const Integer& N, unsigned threads = 1,
                                              std::uint64_t cap = kDefaultEnumerationCap, Precision p = {}) {
    if (N < 1) throw DomainError("adversarial_gamma expects N >= 1");
    if (N > from_u64(cap)) throw ResourceLimitError("N = " + N.get_str() + " exceeds the enumeration cap");
    AdversaryCertificate c;
    c.b = b.value();
    c.N = N;
    c.T = static_cast<long>(mpz_sizeinbase(N.get_mpz_t(), 2));  // ceil(log2(N+1)) = bit length of N
    c.k = (c.T + b.value() - 2) / (b.value() - 1) + 1;
    const Integer M = ipow(b.integer(), static_cast<unsigned long>(c.k)) - 1;
    c.gamma_N = Rational(Integer(1), M);
    c.sharper_bound = c.gamma_N;
    const auto m64 = to_u64(M);
    if (!m64 || *m64 >= (std::uint64_t{1} << 62)) throw ResourceLimitError("b^k - 1 exceeds 62 bits");
    const std::uint64_t mod = *m64;
    const std::uint64_t n_max = *to_u64(N);

    // residue of b_n mod M from the bits of n
    std::vector<std::uint64_t> pw;
    {
        std::uint64_t v = 1 % mod;
        for (int d = 0; d < 64; ++d) {
            pw.push_back(v);
            v = static_cast<std::uint64_t>((static_cast<unsigned __int128>(v) * static_cast<std::uint64_t>(b.value())) % mod);
        }
    }
    struct Best {
        std::uint64_t dist = ~std::uint64_t{0};
        std::uint64_t n = 0;
    };
    auto scan = [&](std::uint64_t from, std::uint64_t to) {
        Best best;
        for (std::uint64_t n = from; n <= to; ++n) {
            std::uint64_t res = 0;
            for (std::uint64_t bits = n; bits != 0; bits &= bits - 1) {
                res += pw[static_cast<std::size_t>(__builtin_ctzll(bits))];
                if (res >= mod) res -= mod;
            }
            const std::uint64_t d = std::min(res, mod - res);
            if (d < best.dist) best = {d, n};
        }
        return best;
    };
    const std::uint64_t shards = std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, n_max));
    std::vector<Best> parts(shards);
    if (shards == 1) {
        parts[0] = scan(1, n_max);
    } else {
        std::vector<std::jthread> pool;
        const std::uint64_t chunk = (n_max + shards - 1) / shards;
        for (std::uint64_t s = 0; s < shards; ++s) {
            const std::uint64_t from = 1 + s * chunk;
            const std::uint64_t to = std::min(n_max, from + chunk - 1);
            if (from <= to) pool.emplace_back([&, s, from, to] { parts[s] = scan(from, to); });
        }
    }
    Best best;
    for (const Best& part : parts)  // shards are in index order; strict < keeps the smallest index
        if (part.n != 0 && part.dist < best.dist) best = part;

    c.min_distance = Rational(from_u64(best.dist), M);
    c.min_witness_index = from_u64(best.n);
    c.min_witness = unrank_Db(b, c.min_witness_index);
    c.lower_bound = adversary_bound(b, N, p);
    c.passed = c.min_distance >= c.lower_bound.upper();
    if (c.min_distance < c.sharper_bound)
        throw InvariantViolation("min ||gamma_N b_n|| fell below 1/(b^k - 1)",
                                 "n=" + c.min_witness_index.get_str() + " b_n=" + c.min_witness.get_str());
    return c;
}

struct ResidueReduction {
    std::vector<long> v;
    std::uint64_t steps = 0;  // single carry steps performed
};

/// Carry steps at the smallest d with u_d >= b: u_d -= b, u_{(d+1) mod k} += 1.
/// The result has all digits in 0..b-1, the same value mod b^k - 1, and a
/// digit sum in (0, sum u].
inline ResidueReduction residue_reduce(Base b, long k, std::vector<long> u) {
    if (k < 1 || static_cast<long>(u.size()) != k) throw DomainError("residue_reduce expects a vector of k >= 1 digits");
    long total = 0;
    for (long x : u) {
        if (x < 0) throw DomainError("residue_reduce expects non-negative digits");
        total += x;
    }
    if (total == 0) throw DomainError("residue_reduce expects a nonzero digit vector");
    const long radix = b.value();
    const Integer M = ipow(b.integer(), static_cast<unsigned long>(k)) - 1;
    auto value = [&](const std::vector<long>& digits) {
        Integer acc = 0;
        for (long d = k - 1; d >= 0; --d) acc = acc * radix + digits[static_cast<std::size_t>(d)];
        return acc;
    };
    const Integer before = value(u);

    ResidueReduction out;
    for (;;) {
        long d = 0;
        while (d < k && u[static_cast<std::size_t>(d)] < radix) ++d;
        if (d == k) break;
        auto& ud = u[static_cast<std::size_t>(d)];
        // Repeating the step at d is what the smallest-index rule does, until
        // u_d < b or (for d = k-1) the wrapped carry lifts u_0 to b.
        long q = ud / radix;
        if (k == 1) {
            ud -= q * (radix - 1);
        } else {
            if (d == k - 1) q = std::min(q, radix - u[0]);
            ud -= q * radix;
            u[static_cast<std::size_t>((d + 1) % k)] += q;
        }
        out.steps += static_cast<std::uint64_t>(q);
    }
    out.v = std::move(u);

    long after = 0;
    for (long x : out.v) after += x;
    if (after <= 0 || after > total || floor_mod(Integer(value(out.v) - before), M) != 0)
        throw InvariantViolation("digit reduction broke one of its guarantees", "k=" + std::to_string(k));
    return out;
}

struct FoldResult {
    Integer w;                // the power sum itself
    Integer c_w;              // reduced residue representative
    std::vector<long> digits; // v
    bool multiple = false;    // c_w = b^k - 1, i.e. w is a multiple of b^k - 1
};

/// sum_i b^(e_i) folded mod b^k - 1 into A(b, k, t), t = #exponents.
inline FoldResult reduce_to_A(Base b, long k, const std::vector<long>& exponents) {
    if (exponents.empty()) throw DomainError("reduce_to_A expects t >= 1 exponents");
    if (k < 1) throw DomainError("reduce_to_A expects k >= 1");
    const long t = static_cast<long>(exponents.size());
    FoldResult out;
    std::vector<long> u(static_cast<std::size_t>(k), 0);
    for (long e : exponents) {
        if (e < 0) throw DomainError("reduce_to_A expects non-negative exponents");
        out.w += ipow(b.integer(), static_cast<unsigned long>(e));
        ++u[static_cast<std::size_t>(e % k)];
    }
    out.digits = residue_reduce(b, k, std::move(u)).v;
    long digit_sum = 0;
    for (long d = k - 1; d >= 0; --d) {
        out.c_w = out.c_w * b.value() + out.digits[static_cast<std::size_t>(d)];
        digit_sum += out.digits[static_cast<std::size_t>(d)];
    }
    const Integer M = ipow(b.integer(), static_cast<unsigned long>(k)) - 1;
    out.multiple = out.c_w == M;
    const bool in_A = out.c_w >= 1 && out.c_w <= M && digit_sum <= t;
    if (!in_A || floor_mod(Integer(out.w - out.c_w), M) != 0)
        throw InvariantViolation("folded residue is not a member of A(b,k,t) congruent to w", "w=" + out.w.get_str());
    return out;
}

struct NoMultiplesResult {
    bool holds = true;
    std::optional<Integer> counterexample;  // least element of the truncation divisible by b^k - 1
    std::uint64_t checked = 0;
};

/// No element of Z(b,t) with exponents <= e_max is divisible by b^k - 1.
/// A multiple is an invariant failure when k > t/(b-1).
inline NoMultiplesResult no_multiples_check(Base b, long k, long t, long e_max,
                                            std::uint64_t cap = kDefaultEnumerationCap) {
    if (k < 1 || t < 1) throw DomainError("no_multiples_check expects k, t >= 1");
    const Integer M = ipow(b.integer(), static_cast<unsigned long>(k)) - 1;
    NoMultiplesResult out;
    auto stream = enum_set(SetSpec::Zbt(b, t, e_max), {std::nullopt, cap});
    while (auto w = stream.next()) {
        ++out.checked;
        if (floor_mod(*w, M) == 0) {
            out.holds = false;
            out.counterexample = *w;
            break;
        }
    }
    if (!out.holds && k * (b.value() - 1) > t)
        throw InvariantViolation("a sum of t powers of b is divisible by b^k - 1 although k > t/(b-1)",
                                 "w=" + out.counterexample->get_str());
    return out;
}

}  // namespace radix_approx
