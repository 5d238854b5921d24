#pragma once

// End-to-end acceptance checks. Each criterion runs a seeded randomized or
// exhaustive sweep and reports one pass/fail line. Tolerances are fixed here.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "radix_approx/radix_approx.hpp"

namespace radix_approx::acceptance {

inline constexpr double kIdentityRelTol = 1e-9;   // |S| vs the cosine product, relative with a unit floor
inline constexpr double kBoundAbsTol = 1e-9;      // |S| vs the cosine and decay bounds
inline constexpr double kMarginTol = 1e-12;       // cos_bound_margin floor
inline constexpr std::uint64_t kDefaultSeed = 0x5eed2024;

struct Options {
    std::uint64_t seed = kDefaultSeed;
    unsigned threads = 1;
    Precision precision{};
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0;
};

namespace detail {

using Rng = std::mt19937_64;

inline long uniform(Rng& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

inline Rational random_rational(Rng& rng, long max_den) {
    const long q = uniform(rng, 1, max_den);
    return Rational(Integer(uniform(rng, 0, q - 1)), Integer(q));
}

// Runs one sweep, turning library errors into a failed line with the message.
inline CriterionResult run(int id, std::string name, const std::function<std::string(bool&)>& body) {
    CriterionResult r{id, std::move(name), false, {}, 0};
    const auto t0 = std::chrono::steady_clock::now();
    try {
        r.passed = true;
        r.detail = body(r.passed);
    } catch (const InvariantViolation& e) {
        r.passed = false;
        r.detail = std::string("invariant violation: ") + e.what() + " [" + e.witness() + "]";
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline Rational tol(double v) { return Rational::from_double(v); }

}  // namespace detail

inline CriterionResult pigeonhole_guarantee(const Options& opt) {
    return detail::run(1, "pigeonhole guarantee ||gamma w|| <= 1/(t+1)", [&](bool& ok) {
        detail::Rng rng(opt.seed ^ 1);
        long cases = 0;
        for (int i = 0; i < 200; ++i) {
            const RealValue gamma(detail::random_rational(rng, 1'000'000));
            for (long b : {2L, 3L, 5L, 10L}) {
                for (long N : {1'000L, 10'000L, 100'000L, 1'000'000L}) {
                    const ApproxResult w = pigeonhole_witness(gamma, Base(b), Integer(N));
                    const Rational d = dist_to_nearest_int(gamma.exact() * Rational(w.witness));
                    const Rational bound(1, t_of(Base(b), Integer(N)) + 1);
                    if (w.witness < 1 || w.witness > N || !contains_Db(Base(b), w.witness) || d > bound ||
                        d != w.distance.exact())
                        ok = false;
                    ++cases;
                }
            }
        }
        return std::to_string(cases) + " cases";
    });
}

inline CriterionResult adversary_certificates(const Options& opt) {
    return detail::run(2, "lower-bound certificate min ||gamma_N b_n|| >= b^-4 N^(-log2 b/(b-1))", [&](bool& ok) {
        long cases = 0;
        long cross = 0;
        for (long b = 2; b <= 10; ++b) {
            for (long N : {1L, 2L, 7L, 100L, 1L << 10, 1L << 14}) {
                const AdversaryCertificate c = adversarial_gamma(Base(b), Integer(N), opt.threads);
                ok = ok && c.passed && c.min_distance >= c.lower_bound.upper();
                if (N <= (1L << 10)) {
                    const ApproxResult o = oracle_min_reference(RealValue(c.gamma_N), SetSpec::Db(Base(b)),
                                                                unrank_Db(Base(b), Integer(N)));
                    ok = ok && o.distance.exact() == c.min_distance;
                    ++cross;
                }
                ++cases;
            }
        }
        return std::to_string(cases) + " certificates, " + std::to_string(cross) + " cross-checked against oracle_min";
    });
}

inline CriterionResult cosine_product(const Options& opt) {
    return detail::run(3, "exponential-sum product identity and cosine bound", [&](bool& ok) {
        detail::Rng rng(opt.seed ^ 3);
        double worst_rel = 0;
        ExpSumOptions eo;
        eo.threads = opt.threads;
        eo.precision = opt.precision;
        for (int i = 0; i < 1000; ++i) {
            const long b = detail::uniform(rng, 2, 10);
            const long r = detail::uniform(rng, 0, 18);
            const long k = detail::uniform(rng, 1, 100);
            const RealValue gamma(detail::random_rational(rng, 1'000'000));
            const ExpSumReport rep = eval_expsum(Base(b), r, k, gamma, false, eo);
            const Rational mag = rep.magnitude.center();
            const Rational prod = rep.product_magnitude.center();
            const Rational scale = std::max(prod, Rational(1));
            const Rational rel = (mag - prod).abs() / scale;
            worst_rel = std::max(worst_rel, rel.to_double());
            if (rel > detail::tol(kIdentityRelTol)) ok = false;
            if (rep.magnitude.lower() > rep.cosine_bound.upper() + detail::tol(kBoundAbsTol)) ok = false;
        }
        std::ostringstream s;
        s << "1000 sums, worst relative deviation " << worst_rel;
        return s.str();
    });
}

inline CriterionResult g_class_shift(const Options& opt) {
    return detail::run(4, "G-class shift classify(b y) = classify(y) - 1", [&](bool& ok) {
        detail::Rng rng(opt.seed ^ 4);
        long cases = 0;
        while (cases < 100'000) {
            const long b = std::vector<long>{2, 3, 5}[static_cast<std::size_t>(detail::uniform(rng, 0, 2))];
            const long t = detail::uniform(rng, 2, 12);
            // x uniform on a 2^30 grid of (1/(2 b^t), 1/(2 b^(t-1))]
            const Rational lo(Integer(1), Integer(2 * ipow(Integer(b), static_cast<unsigned long>(t))));
            const Rational hi = lo * Rational(b);
            const Rational x = lo + (hi - lo) * Rational(Integer(detail::uniform(rng, 1, 1L << 30)), Integer(1L << 30));
            const long shift = detail::uniform(rng, -1000, 1000);
            const Rational y = Rational(shift) + (detail::uniform(rng, 0, 1) ? x : -x);
            const GClass g = classify_G(Base(b), RealValue(y));
            const GClass g1 = classify_G(Base(b), RealValue(y * Rational(b)));
            if (!g.t || *g.t != t || !g1.t || *g1.t != t - 1) ok = false;
            ++cases;
        }
        return std::to_string(cases) + " values";
    });
}

inline CriterionResult conditional_bounds(const Options& opt) {
    return detail::run(5, "small-shift count and decay bound under the separation hypothesis", [&](bool& ok) {
        detail::Rng rng(opt.seed ^ 5);
        std::set<std::string> seen;
        long attempts = 0;
        ExpSumOptions eo;
        eo.threads = opt.threads;
        eo.precision = opt.precision;
        const long wanted = 100;
        const long wanted_deep = 20;  // small r satisfies the hypothesis too easily to be the whole sample
        long max_r = 0;
        long deep = 0;  // instances with r >= 8
        while ((static_cast<long>(seen.size()) < wanted || deep < wanted_deep) && attempts < 400'000) {
            ++attempts;
            const long b = detail::uniform(rng, 2, 10);
            const long m = detail::uniform(rng, 1, 3);
            const long r = detail::uniform(rng, 0, 20);
            const long k = detail::uniform(rng, 1, 64);
            // gamma = a/(b^(r+2) +- 1): multiplication by b rotates the digits of a
            const Integer den = ipow(Integer(b), static_cast<unsigned long>(r + 2)) + (detail::uniform(rng, 0, 1) ? 1 : -1);
            Integer a = 0;
            for (long d = 0; d < r + 2; ++d) a = a * b + detail::uniform(rng, 0, b - 1);
            if (a == 0 || a >= den) continue;
            const RealValue gamma{Rational(a, den)};
            const Rational beta(Integer(1), Integer(2 * ipow(Integer(b), static_cast<unsigned long>(m))));
            if ((std::uint64_t{1} << (r + 1)) > kDefaultEnumerationCap) continue;
            if (!hypothesis_check(Base(b), r, beta, gamma).holds) continue;
            std::ostringstream key;
            key << b << ',' << r << ',' << m << ',' << k << ',' << gamma.exact().str();
            if (static_cast<long>(seen.size()) >= wanted && r < 8) continue;
            if (!seen.insert(key.str()).second) continue;
            max_r = std::max(max_r, r);
            deep += r >= 8;

            const ShiftCount sc = small_shift_count(Base(b), r, k, gamma, beta, true);
            if (!below_three_sqrt(sc.g, k)) ok = false;
            const ExpSumReport rep = decay_check(Base(b), r, k, m, gamma, eo);  // throws on violation
            if (rep.magnitude.upper() > rep.decay_bound->upper() + detail::tol(kBoundAbsTol)) ok = false;
        }
        if (static_cast<long>(seen.size()) < wanted || deep < wanted_deep) {
            ok = false;
            return "generator failure: " + std::to_string(seen.size()) + " hypothesis-satisfying instances (" +
                   std::to_string(deep) + " with r >= 8) in " + std::to_string(attempts) + " attempts";
        }
        return std::to_string(seen.size()) + " instances from " + std::to_string(attempts) + " candidates (" +
               std::to_string(deep) + " with r >= 8, max r " + std::to_string(max_r) + ")";
    });
}

inline CriterionResult erdos_turan(const Options& opt) {
    return detail::run(6, "Erdos-Turan inequality on {n gamma}", [&](bool& ok) {
        detail::Rng rng(opt.seed ^ 6);
        long irrational = 0;
        for (int i = 0; i < 100; ++i) {
            const long T = detail::uniform(rng, 1, 2000);
            RealValue gamma;
            if (i % 2 == 0) {
                gamma = RealValue(detail::random_rational(rng, 1'000'000));
            } else {
                static const char* named[] = {"pi", "e", "sqrt2", "sqrt3", "sqrt5", "sqrt7", "sqrt11"};
                gamma = parse_real(named[detail::uniform(rng, 0, 6)], opt.precision);
                ++irrational;
            }
            const auto points = kronecker_points(gamma, T);
            for (long G : {1L, 5L, 50L}) {
                const DiscrepancyReport rep = erdos_turan_check(points, G, opt.precision);
                ok = ok && *rep.et_holds;
            }
        }
        return "100 sequences (" + std::to_string(irrational) + " with interval gamma) x G in {1, 5, 50}";
    });
}

inline CriterionResult difference_sets(const Options&) {
    return detail::run(7, "difference-set maxima M2+ <= M1+ <= floor(log_b N) + 2", [&](bool& ok) {
        long cases = 0;
        for (long b : {3L, 4L, 5L}) {
            for (long N = 1; N <= 150; ++N) {
                const DiffSetReport m1 = m_plus_Db(Base(b), N, MPlusVariant::M1);
                const DiffSetReport m2 = m_plus_Db(Base(b), N, MPlusVariant::M2);
                ok = ok && m1.value <= *m1.bound && m2.value <= m1.value;
                ++cases;
            }
        }
        const DiffSetReport ex = m_plus_Db(Base(3), 13, MPlusVariant::M1);
        const IntSet S = db_upto(Base(3), 13);
        const IntSet diffs = positive_differences(ex.witness);
        const bool witness_ok = std::includes(S.begin(), S.end(), diffs.begin(), diffs.end());
        ok = ok && ex.value == 4 && witness_ok;
        std::ostringstream s;
        s << cases << " (b, N) pairs; b=3 N=13: M1+ = " << ex.value << " witness {";
        for (std::size_t i = 0; i < ex.witness.size(); ++i) s << (i ? "," : "") << ex.witness[i];
        s << "}";
        return s.str();
    });
}

inline CriterionResult residue_suite(const Options&) {
    return detail::run(8, "residue reduction, folding into A(b,k,t), no multiples of b^k - 1", [&](bool& ok) {
        long folds = 0;
        long vectors = 0;
        for (long b : {2L, 3L, 5L}) {
            for (long t = 1; t <= 4; ++t) {
                const long k_top = t / (b - 1) + 3;
                for (long e_max = 0; e_max <= 6; ++e_max) {
                    // every multiset of t exponents from 0..e_max
                    std::vector<long> ex(static_cast<std::size_t>(t), 0);
                    for (;;) {
                        for (long k = 1; k <= k_top; ++k) {
                            const FoldResult f = reduce_to_A(Base(b), k, ex);  // checks membership and congruence
                            if (f.multiple && k * (b - 1) > t) ok = false;
                            ++folds;
                        }
                        std::size_t pos = ex.size();
                        while (pos > 0 && ex[pos - 1] == e_max) --pos;
                        if (pos == 0) break;
                        const long v = ex[pos - 1] + 1;
                        for (std::size_t j = pos - 1; j < ex.size(); ++j) ex[j] = v;
                    }
                    for (long k = 1; k <= k_top; ++k) {
                        if (k * (b - 1) <= t) continue;
                        ok = ok && no_multiples_check(Base(b), k, t, e_max).holds;
                    }
                }
                for (long k = 1; k <= k_top; ++k) {
                    if (k * (b - 1) <= t) continue;
                    const AbktResult A = enum_Abkt(Base(b), k, t);  // checks h against the case formula
                    ok = ok && A.h <= ipow(Integer(b), static_cast<unsigned long>(k)) - 2;
                }
            }
            // all digit vectors with sum <= 12, k <= 4
            for (long k = 1; k <= 4; ++k) {
                std::vector<long> u(static_cast<std::size_t>(k), 0);
                std::function<void(std::size_t, long)> rec = [&](std::size_t pos, long left) {
                    if (pos == u.size()) {
                        long total = 0;
                        for (long x : u) total += x;
                        if (total == 0) return;
                        const ResidueReduction rr = residue_reduce(Base(b), k, u);
                        Integer before = 0, after = 0;
                        long sum = 0;
                        for (long d = k - 1; d >= 0; --d) {
                            before = before * b + u[static_cast<std::size_t>(d)];
                            after = after * b + rr.v[static_cast<std::size_t>(d)];
                            sum += rr.v[static_cast<std::size_t>(d)];
                            if (rr.v[static_cast<std::size_t>(d)] < 0 || rr.v[static_cast<std::size_t>(d)] >= b) ok = false;
                        }
                        const Integer M = ipow(Integer(b), static_cast<unsigned long>(k)) - 1;
                        if (sum <= 0 || sum > total || floor_mod(Integer(before - after), M) != 0) ok = false;
                        ++vectors;
                        return;
                    }
                    for (long x = 0; x <= left; ++x) {
                        u[pos] = x;
                        rec(pos + 1, left - x);
                    }
                    u[pos] = 0;
                };
                rec(0, 12);
            }
        }
        return std::to_string(folds) + " folds, " + std::to_string(vectors) + " digit vectors";
    });
}

inline CriterionResult cosine_margin(const Options& opt) {
    return detail::run(9, "cos(pi x) <= 1 - pi ||x||^2 margin", [&](bool& ok) {
        detail::Rng rng(opt.seed ^ 9);
        const Precision p{64};
        Rational worst(1);
        const long grid = 400'000;
        for (long i = 0; i <= grid; ++i) {
            const Rational x = Rational(-2) + Rational(Integer(4 * i), Integer(grid));
            const Rational lo = cos_bound_margin(RealValue(x), p).lower();
            if (lo < worst) worst = lo;
        }
        for (int i = 0; i < 10'000; ++i) {
            const Rational x = Rational(detail::uniform(rng, -3, 2)) + detail::random_rational(rng, 1'000'000'000);
            const Rational lo = cos_bound_margin(RealValue(x), p).lower();
            if (lo < worst) worst = lo;
        }
        ok = worst >= -detail::tol(kMarginTol);
        std::ostringstream s;
        s << grid + 1 << " grid points + 10000 random, least margin " << worst.to_double();
        return s.str();
    });
}

inline CriterionResult oracle_equivalence(const Options& opt) {
    return detail::run(10, "indexed search equals the reference oracle", [&](bool& ok) {
        detail::Rng rng(opt.seed ^ 10);
        long cases = 0;
        SearchOptions so;
        so.threads = std::max(2u, opt.threads);
        for (int i = 0; i < 50; ++i) {
            const RealValue gamma(detail::random_rational(rng, 1'000'000));
            for (long b = 2; b <= 5; ++b) {
                for (long N : {1L, 9L, 100L, 1000L, 4321L, 10'000L}) {
                    const auto fast = oracle_min_indexed(gamma, SetSpec::Db(Base(b)), Integer(N), so);
                    const ApproxResult ref = oracle_min_reference(gamma, SetSpec::Db(Base(b)), Integer(N));
                    ok = ok && fast && fast->witness == ref.witness && fast->distance.exact() == ref.distance.exact();
                    ++cases;
                }
            }
        }
        return std::to_string(cases) + " searches";
    });
}

inline CriterionResult bound_vacuity(const Options& opt) {
    return detail::run(11, "explicit (log N)^-2 bound is vacuous at enumerable N", [&](bool& ok) {
        std::ostringstream s;
        for (long b = 2; b <= 10; ++b) {
            const ConstantSet cs = compute_constants(Base(b), opt.precision);
            for (long e = 0; e <= 60; ++e) {
                const Integer N = ipow(Integer(b), static_cast<unsigned long>(e));
                const DistanceBound tb = distance_bound(Base(b), N, cs, opt.precision);
                ok = ok && tb.vacuous;
            }
            if (b == 2 || b == 3 || b == 10)
                s << "b=" << b << " J_b~" << static_cast<long>(cs.J_b.to_double()) << " informative from t="
                  << first_informative_t(Base(b), cs) << "; ";
        }
        s << "vacuous for every N = b^e, e <= 60";
        return s.str();
    });
}

inline std::vector<CriterionResult> run_all(const Options& opt = {}) {
    return {pigeonhole_guarantee(opt), adversary_certificates(opt), cosine_product(opt),  g_class_shift(opt),
            conditional_bounds(opt),   erdos_turan(opt),            difference_sets(opt), residue_suite(opt),
            cosine_margin(opt),        oracle_equivalence(opt),     bound_vacuity(opt)};
}

inline std::string format_line(const CriterionResult& r) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(2);
    s << (r.passed ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.name << " -- " << r.detail << " (" << r.seconds
      << " s)";
    return s.str();
}

}  // namespace radix_approx::acceptance
