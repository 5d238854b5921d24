#include <catch_amalgamated.hpp>

#include "radix_approx/exact.hpp"

using namespace radix_approx;

namespace {
// v, a decimal correct to about 20 digits, within the enclosure of x
bool encloses(const RealValue& x, const char* v) {
    const Rational r = Rational::parse(v);
    const Rational slack = Rational::parse("1e-20");
    return x.lower() - slack <= r && r <= x.upper() + slack;
}
}  // namespace

TEST_CASE("rational literals") {
    CHECK(Rational::parse("3/6") == Rational(1, 2));
    CHECK(Rational::parse("-0.25") == Rational(-1, 4));
    CHECK(Rational::parse("1e-3") == Rational(1, 1000));
    CHECK(Rational::parse("2.5e2") == Rational(250));
    CHECK(Rational::parse("-7") == Rational(-7));
    CHECK_THROWS_AS(Rational::parse("1/0"), DomainError);
    CHECK_THROWS_AS(Rational::parse("abc"), DomainError);
    CHECK_THROWS_AS(Rational::parse(""), DomainError);
}

TEST_CASE("rational formatting") {
    CHECK(Rational(2).fraction_str() == "2/1");
    CHECK(Rational(2).str() == "2");
    CHECK(Rational(-6, 4).fraction_str() == "-3/2");
}

TEST_CASE("fractional part and distance to the nearest integer") {
    CHECK(dist_to_nearest_int(Rational(1, 2)) == Rational(1, 2));
    CHECK(dist_to_nearest_int(Rational(-3, 10)) == Rational(3, 10));
    CHECK(dist_to_nearest_int(Rational(13, 26)) == Rational(1, 2));
    CHECK(dist_to_nearest_int(Rational(5)) == Rational(0));
    CHECK(frac(Rational(7, 5)) == Rational(2, 5));
    CHECK(frac(Rational(-1, 4)) == Rational(3, 4));
    CHECK(frac(Rational(3)) == Rational(0));
}

TEST_CASE("distance on enclosures") {
    const Precision p{};
    const RealValue near_one(Interval(Rational(9, 10), Rational(11, 10)), p);
    const RealValue d = dist_to_nearest_int(near_one);
    CHECK(d.lower() == Rational(0));
    CHECK(d.upper() >= Rational(1, 10));
    CHECK(d.upper() - Rational(1, 10) < Rational::parse("1e-30"));

    // endpoints are rounded outward to the working precision
    const RealValue mid(Interval(Rational(2, 5), Rational(3, 5)), p);
    CHECK(dist_to_nearest_int(mid).lower() <= Rational(2, 5));
    CHECK(Rational(2, 5) - dist_to_nearest_int(mid).lower() < Rational::parse("1e-30"));
    CHECK(dist_to_nearest_int(mid).upper() == Rational(1, 2));

    CHECK_THROWS_AS(frac(near_one), IndeterminateError);
    CHECK(frac(mid).enclosure().contains(Rational(2, 5)));
}

TEST_CASE("pi enclosure is tight") {
    const Interval pi = pi_interval(Precision{128});
    CHECK(pi.contains(Rational::parse("3.141592653589793238462643383279502884197")));
    CHECK(pi.width() < Rational(Integer(1), Integer(ipow(2, 120))));
}

TEST_CASE("cosine inequality margin") {
    // values from an independent 50-digit evaluation
    CHECK(encloses(cos_bound_margin(Rational(1, 4)), "0.096543677964090398195"));
    CHECK(encloses(cos_bound_margin(Rational(1, 2)), "0.21460183660255169038"));
    CHECK(encloses(cos_bound_margin(Rational(1, 3)), "0.15093414960113408462"));
    CHECK(encloses(cos_bound_margin(Rational(-7, 10)), "0.12947140888444547937"));
    const RealValue zero = cos_bound_margin(Rational(0));
    CHECK(zero.lower() <= Rational(0));
    CHECK(zero.upper() >= Rational(0));
    CHECK(cos_bound_margin(Rational(1, 4)).radius() < Rational(Integer(1), Integer(ipow(2, 100))));
}

TEST_CASE("real literals") {
    CHECK(parse_real("3/7").exact() == Rational(3, 7));
    CHECK(parse_real("0.125").exact() == Rational(1, 8));
    CHECK(encloses(parse_real("sqrt2"), "1.41421356237309504880168872420969807857"));
    CHECK(encloses(parse_real("-sqrt2"), "-1.41421356237309504880168872420969807857"));
    CHECK(encloses(parse_real("pi"), "3.141592653589793238462643383279502884197"));
    CHECK(encloses(parse_real("e"), "2.71828182845904523536028747135266249775"));
    CHECK(parse_real("sqrt9").exact() == Rational(3));

    const RealValue u = parse_real("1/3+-1/100");
    CHECK(u.lower() <= Rational(1, 3) - Rational(1, 100));
    CHECK(u.upper() >= Rational(1, 3) + Rational(1, 100));
    const RealValue v = parse_real("2\xC2\xB1" "0.5");
    CHECK(v.lower() <= Rational(3, 2));
    CHECK(v.upper() >= Rational(5, 2));
    CHECK_THROWS_AS(parse_real("sqrt-1"), DomainError);
    CHECK_THROWS_AS(parse_real("1+--1"), DomainError);
}

TEST_CASE("comparisons of enclosures") {
    const Precision p{};
    const RealValue a(Interval(Rational(1), Rational(2)), p);
    const RealValue b(Interval(Rational(3, 2), Rational(3)), p);
    const RealValue c(Interval(Rational(4), Rational(5)), p);
    CHECK(compare(a, b) == Cmp::Indeterminate);
    CHECK(compare(a, c) == Cmp::Less);
    CHECK(compare(c, a) == Cmp::Greater);
    CHECK(compare(RealValue(Rational(1, 2)), RealValue(Rational(2, 4))) == Cmp::Equal);
    CHECK_THROWS_AS(decide_le(a, b, "a <= b"), IndeterminateError);
    CHECK(decide_le(a, c, "a <= c"));
    CHECK_FALSE(decide_lt(c, a, "c < a"));
}

TEST_CASE("outward rounding keeps the value inside") {
    const Rational third(1, 3);
    const Precision p{64};
    CHECK(round_down(third, p) < third);
    CHECK(round_up(third, p) > third);
    CHECK(round_up(third, p) - round_down(third, p) < Rational(Integer(1), Integer(ipow(2, 60))));
    CHECK(round_down(Rational(5, 4), p) == Rational(5, 4));
}

TEST_CASE("interval elementary functions") {
    const Precision p{};
    const Interval s = sqrt(Interval::point(Rational(2)), p);
    CHECK(s.lo() * s.lo() <= Rational(2));
    CHECK(s.hi() * s.hi() >= Rational(2));
    const Interval l = log(Interval::point(Rational(1)), p);
    CHECK(l.contains(Rational(0)));
    const Interval pw = pow(Interval::point(Rational(4)), Interval::point(Rational(1, 2)), p);
    CHECK(pw.contains(Rational(2)));
    const Interval c = cos_pi_on_half_period(Interval::point(Rational(1, 3)), p);
    CHECK(c.contains(Rational(1, 2)));
}
