#pragma once

#include "radix_approx/exact.hpp"

// True when the decimal `expect` lies within the enclosure of x widened by `slack`.
inline bool near(const radix_approx::RealValue& x, const char* expect, const char* slack = "1e-18") {
    using radix_approx::Rational;
    const Rational v = Rational::parse(expect);
    const Rational s = Rational::parse(slack);
    return x.lower() - s <= v && v <= x.upper() + s;
}
