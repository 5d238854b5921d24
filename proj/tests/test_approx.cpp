#include <catch_amalgamated.hpp>

#include "radix_approx/approx.hpp"

using namespace radix_approx;

namespace {
Rational q(const char* s) { return Rational::parse(s); }

ApproxResult search(const char* gamma, long b, long N) {
    return oracle_min(parse_real(gamma), SetSpec::Db(Base(b)), Integer(N));
}
}  // namespace

TEST_CASE("oracle minimum on small inputs") {
    const ApproxResult zero = search("0", 3, 100);
    CHECK(zero.witness == 1);
    CHECK(zero.distance.exact() == Rational(0));

    const ApproxResult a = search("1/26", 3, 13);
    CHECK(a.witness == 1);
    CHECK(a.distance.exact() == q("1/26"));

    const ApproxResult h = search("1/2", 2, 7);
    CHECK(h.witness == 2);
    CHECK(h.distance.exact() == Rational(0));
    CHECK(h.mode == Mode::Exact);
}

TEST_CASE("oracle minimum matches independent enumeration") {
    // values computed by a separate big-integer script
    struct Row {
        const char* gamma;
        long b;
        long N;
        long witness;
        const char* distance;
    };
    const Row rows[] = {
        {"355/113", 3, 1000000, 3277, "0"},     {"1/7", 3, 1000, 28, "0"},
        {"12345/999983", 2, 5000, 81, "38/999983"}, {"22/7", 5, 10000, 126, "0"},
        {"3/1000", 10, 100000, 1000, "0"},
    };
    for (const Row& r : rows) {
        INFO(r.gamma << " b=" << r.b << " N=" << r.N);
        const ApproxResult res = search(r.gamma, r.b, r.N);
        CHECK(res.witness == r.witness);
        CHECK(res.distance.exact() == q(r.distance));
        const ApproxResult ref = oracle_min_reference(parse_real(r.gamma), SetSpec::Db(Base(r.b)), Integer(r.N));
        CHECK(ref.witness == res.witness);
    }
}

TEST_CASE("oracle minimum for an irrational input") {
    const ApproxResult res = search("sqrt2", 2, 1000);
    CHECK(res.witness == 985);
    CHECK(res.mode == Mode::Approximate);
    const Rational expect = q("0.00035893749862306966339");
    CHECK(res.distance.lower() <= expect + q("1e-22"));
    CHECK(res.distance.upper() >= expect - q("1e-22"));
}

TEST_CASE("threaded search agrees with the serial one") {
    for (unsigned th : {2u, 3u, 4u}) {
        const ApproxResult a = oracle_min(parse_real("12345/999983"), SetSpec::Db(Base(2)), Integer(5000), {th});
        CHECK(a.witness == 81);
    }
}

TEST_CASE("pigeonhole witness") {
    CHECK(pigeonhole_witness(parse_real("1/5"), Base(2), Integer(7)).witness == 1);
    CHECK(pigeonhole_witness(parse_real("1/2"), Base(2), Integer(7)).witness == 2);

    const ApproxResult p = pigeonhole_witness(parse_real("355/113"), Base(3), Integer(1000000));
    CHECK(p.witness == 265720);
    CHECK(p.distance.exact() == q("8/113"));
    REQUIRE(p.guarantee);
    CHECK(*p.guarantee == q("1/13"));
    CHECK(p.distance.exact() <= *p.guarantee);
    CHECK(contains_Db(Base(3), p.witness));
}

TEST_CASE("two-power differences") {
    CHECK(as_two_power_difference(Base(3), 24) == std::pair<long, long>{3, 1});
    CHECK(as_two_power_difference(Base(2), 6) == std::pair<long, long>{3, 1});
    CHECK_FALSE(as_two_power_difference(Base(3), 5));
    CHECK_FALSE(as_two_power_difference(Base(3), 0));
}

TEST_CASE("witness transfer from DbStar to Db") {
    const TransferResult a = transfer_witness(Base(3), 4, RealValue(q("1/10")));
    CHECK(a.n == 4);
    CHECK(a.branch == TransferBranch::InDb);
    CHECK(a.distance_bound.exact() == q("1/5"));
    const TransferResult b = transfer_witness(Base(3), 8, RealValue(q("1/10")));
    CHECK(b.n == 4);
    CHECK(b.branch == TransferBranch::TwoPowerDifference);
    CHECK(transfer_witness(Base(3), 24, RealValue(0)).n == 12);
    CHECK_THROWS_AS(transfer_witness(Base(3), 5, RealValue(0)), DomainError);
}

TEST_CASE("searches beyond the cap are resource limits") {
    CHECK_THROWS_AS(oracle_min(parse_real("1/3"), SetSpec::Db(Base(2)), Integer(1000), {1, 10}), ResourceLimitError);
}
