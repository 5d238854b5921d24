#pragma once

// Structured integer sets built from base-b digits.
//
//   Db           positive integers whose base-b digits are all 0 or 1
//   Dbr(r)       {sum_{d<=r} xi_d b^d : xi_d in {0,1}}, including 0
//   DbStar       Db together with every b^d - b^c, d > c >= 0
//   DbStarR(r)   Dbr(r) together with b^d - b^c, 0 <= c < d <= r
//   P(N)         repunits 1 + b + ... + b^d for d <= t(b, N)
//   Zbt(t, e)    sums of exactly t powers b^u with 0 <= u <= e
//   Abkt(k, t)   k-digit base-b values with digit sum in (0, t]

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "radix_approx/errors.hpp"
#include "radix_approx/exact.hpp"

namespace radix_approx {

class Base {
public:
    explicit Base(long b) : b_(b) {
        if (b < 2) throw DomainError("base must be at least 2, got " + std::to_string(b));
    }
    long value() const { return b_; }
    Integer integer() const { return Integer(b_); }

    friend bool operator==(Base, Base) = default;

private:
    long b_;
};

/// Digits least-significant first.
struct DigitVector {
    Base base;
    std::vector<long> digits;
};

inline DigitVector to_digits(Base b, const Integer& n) {
    if (sgn(n) < 0) throw DomainError("to_digits expects a non-negative integer");
    DigitVector out{b, {}};
    Integer rest = n;
    const Integer radix = b.integer();
    while (sgn(rest) > 0) {
        Integer digit;
        mpz_fdiv_qr(rest.get_mpz_t(), digit.get_mpz_t(), rest.get_mpz_t(), radix.get_mpz_t());
        out.digits.push_back(digit.get_si());
    }
    return out;
}

inline Integer from_digits(const DigitVector& v) {
    Integer out = 0;
    for (auto it = v.digits.rbegin(); it != v.digits.rend(); ++it) out = out * v.base.value() + *it;
    return out;
}

inline bool contains_Db(Base b, const Integer& n) {
    if (sgn(n) <= 0) throw DomainError("contains_Db expects n >= 1");
    if (b.value() == 2) return true;
    for (long d : to_digits(b, n).digits)
        if (d > 1) return false;
    return true;
}

/// b_i, the i-th smallest element of Db: the binary digits of i read in base b.
inline Integer unrank_Db(Base b, const Integer& i) {
    if (sgn(i) <= 0) throw DomainError("unrank_Db expects i >= 1");
    const std::size_t bits = mpz_sizeinbase(i.get_mpz_t(), 2);
    Integer out = 0;
    for (std::size_t j = bits; j-- > 0;) {
        out *= b.value();
        if (mpz_tstbit(i.get_mpz_t(), j)) out += 1;
    }
    return out;
}

inline Integer rank_Db(Base b, const Integer& n) {
    if (!contains_Db(b, n)) throw DomainError("rank_Db: " + n.get_str() + " is not in D_" + std::to_string(b.value()));
    Integer out = 0;
    const auto digits = to_digits(b, n).digits;
    for (std::size_t j = 0; j < digits.size(); ++j)
        if (digits[j] == 1) mpz_setbit(out.get_mpz_t(), j);
    return out;
}

/// Largest t with 1 + b + ... + b^t <= N, checked against floor(log_b(N(b-1)+1)) - 1.
inline long t_of(Base b, const Integer& N) {
    if (sgn(N) <= 0) throw DomainError("t_of expects N >= 1");
    long by_sum = 0;
    Integer partial = 1;
    Integer power = 1;
    for (;;) {
        power *= b.value();
        if (partial + power > N) break;
        partial += power;
        ++by_sum;
    }
    // floor(log_b(M)) - 1 in exact integer arithmetic.
    const Integer M = N * (b.value() - 1) + 1;
    long log_floor = -1;
    for (Integer p = 1; p <= M; p *= b.value()) ++log_floor;
    const long by_formula = log_floor - 1;
    if (by_formula != by_sum)
        throw InvariantViolation("t(b,N): geometric sum and logarithm formula disagree",
                                 "b=" + std::to_string(b.value()) + " N=" + N.get_str());
    return by_sum;
}

enum class SetKind { Db, Dbr, DbStar, DbStarR, P, Zbt, Abkt };

struct SetSpec {
    SetKind kind = SetKind::Db;
    Base base{2};
    long r = 0;
    Integer N = 1;
    long t = 1;
    long e_max = 0;
    long k = 1;

    static SetSpec Db(Base b) { return {SetKind::Db, b}; }
    static SetSpec DbStar(Base b) { return {SetKind::DbStar, b}; }
    static SetSpec Dbr(Base b, long r) { return checked({SetKind::Dbr, b, r}); }
    static SetSpec DbStarR(Base b, long r) { return checked({SetKind::DbStarR, b, r}); }
    static SetSpec P(Base b, Integer N) {
        SetSpec s{SetKind::P, b};
        s.N = std::move(N);
        return checked(s);
    }
    static SetSpec Zbt(Base b, long t, long e_max) {
        SetSpec s{SetKind::Zbt, b};
        s.t = t;
        s.e_max = e_max;
        return checked(s);
    }
    static SetSpec Abkt(Base b, long k, long t) {
        SetSpec s{SetKind::Abkt, b};
        s.k = k;
        s.t = t;
        return checked(s);
    }

    static SetSpec checked(SetSpec s) {
        if (s.r < 0) throw DomainError("set parameter r must be >= 0");
        if (s.t < 1) throw DomainError("set parameter t must be >= 1");
        if (s.k < 1) throw DomainError("set parameter k must be >= 1");
        if (s.e_max < 0) throw DomainError("set parameter e_max must be >= 0");
        if (sgn(s.N) < 1) throw DomainError("set parameter N must be >= 1");
        return s;
    }

    // Infinite sets need an explicit upper bound to be enumerated.
    bool is_finite() const { return kind != SetKind::Db && kind != SetKind::DbStar; }

    std::string tag() const {
        const std::string b = "b=" + std::to_string(base.value());
        switch (kind) {
            case SetKind::Db: return "Db(" + b + ")";
            case SetKind::DbStar: return "DbStar(" + b + ")";
            case SetKind::Dbr: return "Dbr(" + b + ",r=" + std::to_string(r) + ")";
            case SetKind::DbStarR: return "DbStarR(" + b + ",r=" + std::to_string(r) + ")";
            case SetKind::P: return "P(" + b + ",N=" + N.get_str() + ")";
            case SetKind::Zbt: return "Zbt(" + b + ",t=" + std::to_string(t) + ",e_max=" + std::to_string(e_max) + ")";
            case SetKind::Abkt: return "Abkt(" + b + ",k=" + std::to_string(k) + ",t=" + std::to_string(t) + ")";
        }
        return "?";
    }
};

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 25;

struct EnumOptions {
    std::optional<Integer> upper;  // yield only elements <= upper
    std::uint64_t cap = kDefaultEnumerationCap;
};

/// Ascending, duplicate-free stream of set elements.
class SetStream {
public:
    using Producer = std::function<std::optional<Integer>()>;

    SetStream(Producer producer, std::optional<Integer> upper, std::uint64_t cap)
        : producer_(std::move(producer)), upper_(std::move(upper)), cap_(cap) {}

    std::optional<Integer> next() {
        if (done_) return std::nullopt;
        std::optional<Integer> v = producer_();
        if (!v || (upper_ && *v > *upper_)) {
            done_ = true;
            return std::nullopt;
        }
        if (++yielded_ > cap_)
            throw ResourceLimitError("set enumeration exceeded the cardinality cap of " + std::to_string(cap_));
        return v;
    }

    template <class F>
    void for_each(F&& fn) {
        while (auto v = next()) fn(*v);
    }

    std::vector<Integer> collect() {
        std::vector<Integer> out;
        for_each([&](const Integer& v) { out.push_back(v); });
        return out;
    }

private:
    Producer producer_;
    std::optional<Integer> upper_;
    std::uint64_t cap_;
    std::uint64_t yielded_ = 0;
    bool done_ = false;
};

namespace detail {

// Ascending b^d - b^c with c < d <= max_d (when given) and value <= upper (when given).
inline std::vector<Integer> two_power_differences(Base b, std::optional<long> max_d, const std::optional<Integer>& upper) {
    if (!max_d && !upper) throw DomainError("two_power_differences needs a bound");
    std::vector<Integer> out;
    for (long d = 1;; ++d) {
        if (max_d && d > *max_d) break;
        const Integer top = ipow(b.integer(), static_cast<unsigned long>(d));
        // The smallest difference with this d is b^d - b^(d-1); beyond upper, stop.
        const Integer smallest = top - ipow(b.integer(), static_cast<unsigned long>(d - 1));
        if (upper && smallest > *upper) break;
        for (long c = 0; c < d; ++c) {
            Integer v = top - ipow(b.integer(), static_cast<unsigned long>(c));
            if (!upper || v <= *upper) out.push_back(std::move(v));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Merge an ascending producer with an ascending list, dropping duplicates.
inline SetStream::Producer merge_unique(SetStream::Producer a, std::vector<Integer> list) {
    struct State {
        SetStream::Producer a;
        std::optional<Integer> head;
        bool primed = false;
        std::vector<Integer> list;
        std::size_t pos = 0;
        std::optional<Integer> last;
    };
    auto st = std::make_shared<State>();
    st->a = std::move(a);
    st->list = std::move(list);
    return [st]() -> std::optional<Integer> {
        for (;;) {
            if (!st->primed) {
                st->head = st->a();
                st->primed = true;
            }
            std::optional<Integer> pick;
            const bool list_left = st->pos < st->list.size();
            if (st->head && (!list_left || *st->head <= st->list[st->pos])) {
                pick = st->head;
                st->primed = false;
            } else if (list_left) {
                pick = st->list[st->pos++];
            } else {
                return std::nullopt;
            }
            if (st->last && *pick == *st->last) continue;
            st->last = pick;
            return pick;
        }
    };
}

inline std::uint64_t checked_cardinality(const Integer& count, std::uint64_t cap, const std::string& what) {
    if (count > from_u64(cap))
        throw ResourceLimitError(what + " has " + count.get_str() + " elements, above the cap of " + std::to_string(cap));
    return *to_u64(count);
}

inline Integer binomial(unsigned long n, unsigned long k) {
    Integer out;
    mpz_bin_uiui(out.get_mpz_t(), n, k);
    return out;
}

}  // namespace detail

inline SetStream enum_set(const SetSpec& spec, const EnumOptions& opt = {}) {
    const Base b = spec.base;
    switch (spec.kind) {
        case SetKind::Db: {
            if (opt.upper) {
                if (sgn(*opt.upper) >= 1) {
                    // Number of elements <= upper: rank of the largest such element.
                    Integer count = 0;
                    const auto digits = to_digits(b, *opt.upper).digits;
                    for (std::size_t j = digits.size(); j-- > 0;) {
                        if (digits[j] > 1) {
                            Integer all_ones;
                            mpz_setbit(all_ones.get_mpz_t(), j + 1);
                            count = count * ipow(2, static_cast<unsigned long>(j + 1)) + all_ones - 1;
                            break;
                        }
                        count = count * 2 + digits[j];
                    }
                    detail::checked_cardinality(count, opt.cap, spec.tag() + " up to " + opt.upper->get_str());
                }
            }
            auto i = std::make_shared<Integer>(0);
            return {[b, i]() -> std::optional<Integer> {
                        *i += 1;
                        return unrank_Db(b, *i);
                    },
                    opt.upper, opt.cap};
        }
        case SetKind::Dbr: {
            detail::checked_cardinality(ipow(2, static_cast<unsigned long>(spec.r + 1)), opt.cap, spec.tag());
            auto i = std::make_shared<Integer>(-1);
            const Integer end = ipow(2, static_cast<unsigned long>(spec.r + 1));
            return {[b, i, end]() -> std::optional<Integer> {
                        *i += 1;
                        if (*i >= end) return std::nullopt;
                        return sgn(*i) == 0 ? Integer(0) : unrank_Db(b, *i);
                    },
                    opt.upper, opt.cap};
        }
        case SetKind::DbStar: {
            if (!opt.upper) throw DomainError("DbStar enumeration requires an upper bound");
            auto diffs = detail::two_power_differences(b, std::nullopt, opt.upper);
            auto db = enum_set(SetSpec::Db(b), opt);
            auto db_ptr = std::make_shared<SetStream>(std::move(db));
            return {detail::merge_unique([db_ptr] { return db_ptr->next(); }, std::move(diffs)), opt.upper, opt.cap};
        }
        case SetKind::DbStarR: {
            auto diffs = detail::two_power_differences(b, spec.r, std::nullopt);
            auto dbr = std::make_shared<SetStream>(enum_set(SetSpec::Dbr(b, spec.r), {std::nullopt, opt.cap}));
            return {detail::merge_unique([dbr] { return dbr->next(); }, std::move(diffs)), opt.upper, opt.cap};
        }
        case SetKind::P: {
            const long t = t_of(b, spec.N);
            auto d = std::make_shared<long>(-1);
            auto partial = std::make_shared<Integer>(0);
            return {[b, t, d, partial]() -> std::optional<Integer> {
                        if (*d >= t) return std::nullopt;
                        ++*d;
                        *partial += ipow(b.integer(), static_cast<unsigned long>(*d));
                        return *partial;
                    },
                    opt.upper, opt.cap};
        }
        case SetKind::Zbt: {
            // Multisets of t exponents from {0..e_max}; materialised, sorted, deduplicated.
            detail::checked_cardinality(detail::binomial(static_cast<unsigned long>(spec.e_max + spec.t),
                                                         static_cast<unsigned long>(spec.t)),
                                        opt.cap, spec.tag());
            std::vector<Integer> powers;
            for (long u = 0; u <= spec.e_max; ++u) powers.push_back(ipow(b.integer(), static_cast<unsigned long>(u)));
            auto values = std::make_shared<std::vector<Integer>>();
            std::vector<long> exps(static_cast<std::size_t>(spec.t), 0);
            for (;;) {
                Integer w = 0;
                for (long e : exps) w += powers[static_cast<std::size_t>(e)];
                values->push_back(std::move(w));
                // next non-decreasing tuple
                std::size_t pos = exps.size();
                while (pos > 0 && exps[pos - 1] == spec.e_max) --pos;
                if (pos == 0) break;
                const long v = exps[pos - 1] + 1;
                for (std::size_t j = pos - 1; j < exps.size(); ++j) exps[j] = v;
            }
            std::sort(values->begin(), values->end());
            values->erase(std::unique(values->begin(), values->end()), values->end());
            auto pos = std::make_shared<std::size_t>(0);
            return {[values, pos]() -> std::optional<Integer> {
                        if (*pos >= values->size()) return std::nullopt;
                        return (*values)[(*pos)++];
                    },
                    opt.upper, opt.cap};
        }
        case SetKind::Abkt: {
            const Integer end = ipow(b.integer(), static_cast<unsigned long>(spec.k));
            detail::checked_cardinality(end, opt.cap, "scan range of " + spec.tag());
            auto n = std::make_shared<std::uint64_t>(0);
            const std::uint64_t stop = *to_u64(end);
            const long radix = b.value();
            const long t = spec.t;
            return {[n, stop, radix, t]() -> std::optional<Integer> {
                        while (++*n < stop) {
                            long digit_sum = 0;
                            for (std::uint64_t rest = *n; rest > 0 && digit_sum <= t; rest /= static_cast<std::uint64_t>(radix))
                                digit_sum += static_cast<long>(rest % static_cast<std::uint64_t>(radix));
                            if (digit_sum <= t) return from_u64(*n);
                        }
                        return std::nullopt;
                    },
                    opt.upper, opt.cap};
        }
    }
    throw DomainError("unknown set kind");
}

/// Largest element of A(b,k,t) by the greedy case formula: fill the top digits with b-1.
inline Integer h_case_formula(Base b, long k, long t) {
    const long bm1 = b.value() - 1;
    const Integer B = b.integer();
    if (t < bm1) return Integer(t) * ipow(B, static_cast<unsigned long>(k - 1));
    const long q = t / bm1;
    if (q >= k) return ipow(B, static_cast<unsigned long>(k)) - 1;  // every digit saturated
    Integer h = 0;
    for (long d = 0; d <= q - 1; ++d) h += Integer(bm1) * ipow(B, static_cast<unsigned long>(k - 1 - d));
    h += Integer(t - bm1 * q) * ipow(B, static_cast<unsigned long>(k - 1 - q));
    return h;
}

struct AbktResult {
    std::vector<Integer> elements;
    Integer h;
};

inline AbktResult enum_Abkt(Base b, long k, long t, std::uint64_t cap = kDefaultEnumerationCap) {
    AbktResult out;
    out.elements = enum_set(SetSpec::Abkt(b, k, t), {std::nullopt, cap}).collect();
    out.h = out.elements.empty() ? Integer(0) : out.elements.back();
    const Integer formula = h_case_formula(b, k, t);
    if (formula != out.h)
        throw InvariantViolation("h(b,k,t): direct maximum and case formula disagree",
                                 "b=" + std::to_string(b.value()) + " k=" + std::to_string(k) + " t=" +
                                     std::to_string(t) + " max=" + out.h.get_str() + " formula=" + formula.get_str());
    return out;
}

}  // namespace radix_approx
