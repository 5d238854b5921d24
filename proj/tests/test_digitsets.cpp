#include <catch_amalgamated.hpp>

#include "radix_approx/digitsets.hpp"

using namespace radix_approx;

namespace {
std::vector<Integer> ints(std::initializer_list<long> v) { return {v.begin(), v.end()}; }
}  // namespace

TEST_CASE("bases below 2 are rejected") {
    CHECK_THROWS_AS(Base(1), DomainError);
    CHECK_THROWS_AS(Base(0), DomainError);
    CHECK(Base(10).value() == 10);
}

TEST_CASE("digit vectors round-trip") {
    const DigitVector d = to_digits(Base(3), 10);
    CHECK(d.digits == std::vector<long>{1, 0, 1});
    CHECK(from_digits(d) == 10);
    CHECK(to_digits(Base(2), 0).digits.empty());
    CHECK_THROWS_AS(to_digits(Base(2), -1), DomainError);
    for (long n = 0; n < 500; ++n) CHECK(from_digits(to_digits(Base(7), n)) == n);
}

TEST_CASE("membership in Db") {
    CHECK(contains_Db(Base(3), 10));
    CHECK_FALSE(contains_Db(Base(3), 5));
    CHECK(contains_Db(Base(2), 1000003));
    CHECK_THROWS_AS(contains_Db(Base(3), 0), DomainError);
    CHECK_FALSE(contains_Db(Base(10), 12));
    CHECK(contains_Db(Base(10), 1101));
}

TEST_CASE("rank and unrank") {
    CHECK(unrank_Db(Base(3), 5) == 10);
    CHECK(rank_Db(Base(3), 10) == 5);
    CHECK(rank_Db(Base(2), 7) == 7);
    CHECK(unrank_Db(Base(10), 1) == 1);
    CHECK(unrank_Db(Base(10), 2) == 10);
    CHECK(unrank_Db(Base(10), 3) == 11);
    for (long i = 1; i < 300; ++i) CHECK(rank_Db(Base(4), unrank_Db(Base(4), i)) == i);
    CHECK_THROWS_AS(rank_Db(Base(3), 5), DomainError);
}

TEST_CASE("t(b, N)") {
    CHECK(t_of(Base(2), 7) == 2);
    CHECK(t_of(Base(3), 4) == 1);
    CHECK(t_of(Base(2), 1) == 0);
    CHECK(t_of(Base(5), 1) == 0);
}

TEST_CASE("finite set enumeration") {
    CHECK(enum_set(SetSpec::Dbr(Base(2), 1)).collect() == ints({0, 1, 2, 3}));
    CHECK(enum_set(SetSpec::DbStarR(Base(3), 1)).collect() == ints({0, 1, 2, 3, 4}));
    CHECK(enum_set(SetSpec::Zbt(Base(3), 1, 2)).collect() == ints({1, 3, 9}));
    CHECK(enum_set(SetSpec::Zbt(Base(2), 2, 2)).collect() == ints({2, 3, 4, 5, 6, 8}));
}

TEST_CASE("infinite streams respect the upper bound") {
    const auto db = enum_set(SetSpec::Db(Base(3)), {Integer(40), kDefaultEnumerationCap}).collect();
    CHECK(db == ints({1, 3, 4, 9, 10, 12, 13, 27, 28, 30, 31, 36, 37, 39, 40}));
    const auto star = enum_set(SetSpec::DbStar(Base(3)), {Integer(10), kDefaultEnumerationCap}).collect();
    for (std::size_t i = 1; i < star.size(); ++i) CHECK(star[i - 1] < star[i]);
    CHECK(std::find(star.begin(), star.end(), Integer(2)) != star.end());  // 3 - 1
    CHECK(std::find(star.begin(), star.end(), Integer(8)) != star.end());  // 9 - 1
}

TEST_CASE("enumeration cap is a resource limit") {
    CHECK_THROWS_AS(enum_set(SetSpec::Db(Base(2)), {std::nullopt, 100}).collect(), ResourceLimitError);
}

TEST_CASE("A(b,k,t) and its maximum") {
    const AbktResult a = enum_Abkt(Base(3), 2, 2);
    CHECK(a.elements == ints({1, 2, 3, 4, 6}));
    CHECK(a.h == 6);
    CHECK(enum_Abkt(Base(2), 1, 1).elements == ints({1}));
    const AbktResult c = enum_Abkt(Base(3), 2, 1);
    CHECK(c.elements == ints({1, 3}));
    CHECK(c.h == 3);
    for (long b = 2; b <= 5; ++b)
        for (long k = 1; k <= 4; ++k)
            for (long t = 1; t <= 8; ++t) CHECK(enum_Abkt(Base(b), k, t).h == h_case_formula(Base(b), k, t));
}
