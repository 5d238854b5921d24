#pragma once

// Seeded random case generators for property tests. Each property draws a
// fixed number of cases from its own seed, so failures are reproducible; the
// failing case is printed through Catch2's INFO.

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <catch_amalgamated.hpp>

#include "radix_approx/exact.hpp"

namespace gen {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    long range(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(eng_); }
    bool coin() { return range(0, 1) == 1; }

    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(range(0, static_cast<long>(v.size()) - 1))];
    }

    radix_approx::Rational rational(long max_den) {
        const long q = range(1, max_den);
        return radix_approx::Rational(radix_approx::Integer(range(0, q - 1)), radix_approx::Integer(q));
    }

    // a rational in [lo, hi) with denominator at most max_den
    radix_approx::Rational rational_in(long lo, long hi, long max_den) {
        return radix_approx::Rational(range(lo, hi - 1)) + rational(max_den);
    }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

inline std::uint64_t seed_for(const char* name) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (const char* p = name; *p; ++p) h = (h ^ static_cast<unsigned char>(*p)) * 1099511628211ull;
    return h;
}

/// Runs `prop(c)` on `runs` cases drawn by `draw(rng)`; `show(c)` describes a case.
template <class Draw, class Show, class Prop>
void for_all(const char* name, int runs, Draw draw, Show show, Prop prop) {
    Rng rng(seed_for(name));
    for (int i = 0; i < runs; ++i) {
        const auto c = draw(rng);
        INFO(name << " case #" << i << ": " << show(c));
        prop(c);
    }
}

template <class... Ts>
std::string describe(const Ts&... parts) {
    std::ostringstream s;
    ((s << parts << ' '), ...);
    return s.str();
}

}  // namespace gen
