#pragma once

// Difference-set combinatorics: D+(A), the maxima M1+(S) and M2+(S) of |J|
// over sets J whose positive differences all lie in S, and a zero-sum subset
// finder over Z/kZ.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "radix_approx/digitsets.hpp"
#include "radix_approx/errors.hpp"

namespace radix_approx {

/// Sorted, duplicate-free set of machine integers.
using IntSet = std::vector<std::int64_t>;

inline IntSet make_set(std::vector<std::int64_t> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline IntSet positive_differences(std::span<const std::int64_t> a) {
    IntSet out;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j)
            if (a[j] > a[i]) out.push_back(a[j] - a[i]);
    return make_set(std::move(out));
}

enum class MPlusVariant { M1, M2 };

struct IntRange {
    std::int64_t lo;
    std::int64_t hi;
};

struct DiffSetReport {
    long value = 0;
    IntSet witness;
    std::optional<long> bound;  // floor(log_b N) + 2 when S = Db cap [1, N], b >= 3
    std::uint64_t nodes = 0;
};

inline constexpr std::uint64_t kDefaultNodeBudget = 50'000'000;

namespace detail {

class CliqueSearch {
public:
    CliqueSearch(const IntSet& s, std::uint64_t budget) : budget_(budget) {
        if (!s.empty() && s.front() > 0) {
            in_s_.assign(static_cast<std::size_t>(s.back()) + 1, false);
            for (std::int64_t v : s) in_s_[static_cast<std::size_t>(v)] = true;
        }
    }

    bool admissible(std::int64_t diff) const {
        return diff > 0 && static_cast<std::size_t>(diff) < in_s_.size() && in_s_[static_cast<std::size_t>(diff)];
    }

    // Depth-first in ascending candidate order; the first maximum found is
    // lexicographically least, later ties are never taken.
    void expand(std::vector<std::int64_t>& clique, const std::vector<std::int64_t>& cands) {
        if (++nodes_ > budget_)
            throw ResourceLimitError("difference-set search exceeded the node budget of " + std::to_string(budget_));
        if (clique.size() > best_.size()) best_ = clique;
        for (std::size_t i = 0; i < cands.size(); ++i) {
            if (clique.size() + (cands.size() - i) <= best_.size()) return;
            const std::int64_t c = cands[i];
            std::vector<std::int64_t> next;
            for (std::size_t j = i + 1; j < cands.size(); ++j)
                if (admissible(cands[j] - c)) next.push_back(cands[j]);
            clique.push_back(c);
            expand(clique, next);
            clique.pop_back();
        }
    }

    const std::vector<std::int64_t>& best() const { return best_; }
    std::uint64_t nodes() const { return nodes_; }

private:
    std::vector<bool> in_s_;
    std::vector<std::int64_t> best_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
};

}  // namespace detail

/// Exhaustive M1+ (J inside `window`) or M2+ (J inside S, and inside `window` if given).
///
/// For M1 the search is anchored at window.lo: any J in the window translates
/// left until min J = window.lo without leaving it, so this loses no optimum
/// and the anchored witness is the lexicographically least one.
inline DiffSetReport m_plus(const IntSet& s, MPlusVariant variant, std::optional<IntRange> window = std::nullopt,
                            std::uint64_t node_budget = kDefaultNodeBudget) {
    if (s.empty()) throw DomainError("m_plus expects a non-empty S");
    if (s.front() < 1) throw DomainError("m_plus expects S inside the positive integers");
    detail::CliqueSearch search(s, node_budget);
    std::vector<std::int64_t> clique;

    if (variant == MPlusVariant::M1) {
        const IntRange w = window.value_or(IntRange{0, s.back()});
        if (w.hi < w.lo) throw DomainError("empty search window");
        std::vector<std::int64_t> cands;
        for (std::int64_t v : s)
            if (w.lo + v <= w.hi) cands.push_back(w.lo + v);
        clique.push_back(w.lo);
        search.expand(clique, cands);
    } else {
        std::vector<std::int64_t> cands;
        for (std::int64_t v : s)
            if (!window || (window->lo <= v && v <= window->hi)) cands.push_back(v);
        search.expand(clique, cands);
    }
    DiffSetReport out;
    out.witness = search.best();
    out.value = static_cast<long>(out.witness.size());
    out.nodes = search.nodes();
    return out;
}

/// floor(log_b N) + 2.
inline long diffset_size_cap(Base b, std::int64_t N) {
    long e = 0;
    for (std::int64_t p = b.value(); p <= N; p *= b.value()) ++e;
    return e + 2;
}

inline IntSet db_upto(Base b, std::int64_t N) {
    IntSet out;
    for (Integer i = 1;; ++i) {
        const Integer v = unrank_Db(b, i);
        if (v > N) break;
        out.push_back(v.get_si());
    }
    return out;
}

/// m_plus over S = Db cap [1, N], with the cap attached for b >= 3.
inline DiffSetReport m_plus_Db(Base b, std::int64_t N, MPlusVariant variant,
                               std::uint64_t node_budget = kDefaultNodeBudget) {
    DiffSetReport out = m_plus(db_upto(b, N), variant, std::nullopt, node_budget);
    if (b.value() >= 3) out.bound = diffset_size_cap(b, N);
    return out;
}

/// Smallest (by size, then by input position) non-empty sub-list whose sum is
/// 0 mod k. Residues must be pairwise distinct mod k. When the list has at
/// least 3 sqrt(k) entries a zero-sum sub-list must exist; not finding one
/// raises InvariantViolation.
inline std::optional<std::vector<std::int64_t>> zero_sum_subset(std::int64_t k, std::span<const std::int64_t> residues,
                                                                std::uint64_t work_budget = std::uint64_t{1} << 32) {
    if (k < 1) throw DomainError("zero_sum_subset expects k >= 1");
    const std::size_t n = residues.size();
    std::vector<std::int64_t> a(n);
    {
        std::vector<bool> seen(static_cast<std::size_t>(k), false);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = ((residues[i] % k) + k) % k;
            if (seen[static_cast<std::size_t>(a[i])])
                throw DomainError("zero_sum_subset: residues are not distinct mod " + std::to_string(k));
            seen[static_cast<std::size_t>(a[i])] = true;
        }
    }
    const bool guaranteed = n > 0 && static_cast<std::uint64_t>(n) * n >= 9 * static_cast<std::uint64_t>(k);

    const std::size_t K = static_cast<std::size_t>(k);
    // layer[s][i * K + x]: some size-s subset of indices >= i sums to x mod k.
    std::vector<std::vector<char>> layer;
    layer.emplace_back((n + 1) * K, 0);
    for (std::size_t i = 0; i <= n; ++i) layer[0][i * K] = 1;

    std::size_t size = 0;
    std::uint64_t work = 0;
    for (std::size_t s = 1; s <= n; ++s) {
        work += static_cast<std::uint64_t>(n) * K;
        if (work > work_budget) throw ResourceLimitError("zero_sum_subset exceeded its work budget");
        std::vector<char> cur((n + 1) * K, 0);
        const std::vector<char>& prev = layer[s - 1];
        for (std::size_t i = n; i-- > 0;) {
            char* row = &cur[i * K];
            const char* below = &cur[(i + 1) * K];
            const char* take = &prev[(i + 1) * K];
            const std::size_t shift = static_cast<std::size_t>(a[i]);
            for (std::size_t x = 0; x < K; ++x) {
                const std::size_t from = (x + K - shift) % K;
                row[x] = below[x] | take[from];
            }
        }
        layer.push_back(std::move(cur));
        if (layer[s][0]) {
            size = s;
            break;
        }
    }

    if (size == 0) {
        if (guaranteed)
            throw InvariantViolation("no zero-sum subset although |residues| >= 3 sqrt(k)", "k=" + std::to_string(k));
        return std::nullopt;
    }

    std::vector<std::int64_t> out;
    std::size_t target = 0;
    std::size_t need = size;
    for (std::size_t i = 0; i < n && need > 0; ++i) {
        const std::size_t rest = (target + K - static_cast<std::size_t>(a[i])) % K;
        if (layer[need - 1][(i + 1) * K + rest]) {
            out.push_back(residues[i]);
            target = rest;
            --need;
        }
    }
    return out;
}

}  // namespace radix_approx
