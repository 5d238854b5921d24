#include <catch_amalgamated.hpp>

#include "near.hpp"
#include "radix_approx/adversary.hpp"

using namespace radix_approx;

TEST_CASE("adversary lower bound values") {
    CHECK(near(adversary_bound(Base(3), 7), "0.00264113517771485697937804917823", "1e-30"));
    CHECK(near(adversary_bound(Base(2), 7), "0.00892857142857142857142857142857", "1e-30"));
    CHECK(near(adversary_bound(Base(2), 1), "0.0625", "0"));
    CHECK(near(adversary_bound(Base(10), 16384), "2.7825594022071245977e-6", "1e-23"));
    CHECK(near(adversary_bound(Base(5), 100), "0.000110447511502929508612036434574", "1e-30"));
}

TEST_CASE("adversarial gamma on small N") {
    const AdversaryCertificate a = adversarial_gamma(Base(2), 7);
    CHECK(a.T == 3);
    CHECK(a.k == 4);
    CHECK(a.gamma_N == Rational(1, 15));
    CHECK(a.min_distance == Rational(1, 15));
    CHECK(a.passed);

    const AdversaryCertificate b = adversarial_gamma(Base(2), 1);
    CHECK(b.k == 2);
    CHECK(b.min_distance == Rational(1, 3));
    CHECK(b.min_witness == 1);

    const AdversaryCertificate c = adversarial_gamma(Base(3), 7);
    CHECK(c.k == 3);
    CHECK(c.min_distance == Rational(1, 26));
    CHECK(c.passed);
    CHECK(c.min_distance >= c.sharper_bound);
}

TEST_CASE("adversarial gamma with threads matches the serial scan") {
    const AdversaryCertificate s = adversarial_gamma(Base(3), 5000, 1);
    const AdversaryCertificate t = adversarial_gamma(Base(3), 5000, 3);
    CHECK(s.min_distance == t.min_distance);
    CHECK(s.min_witness_index == t.min_witness_index);
}

TEST_CASE("adversarial gamma rejects bad N") {
    CHECK_THROWS_AS(adversarial_gamma(Base(2), 0), DomainError);
    CHECK_THROWS_AS(adversarial_gamma(Base(2), 1000, 1, 10), ResourceLimitError);
}

TEST_CASE("digit reduction mod b^k - 1") {
    CHECK(residue_reduce(Base(3), 2, {3, 0}).v == std::vector<long>{0, 1});
    const ResidueReduction r = residue_reduce(Base(2), 2, {2, 1});
    CHECK(r.v == std::vector<long>{1, 0});
    CHECK(r.steps == 2);
    CHECK(residue_reduce(Base(3), 2, {1, 1}).v == std::vector<long>{1, 1});
    CHECK(residue_reduce(Base(10), 1, {25}).v == std::vector<long>{7});
    CHECK_THROWS_AS(residue_reduce(Base(3), 2, {0, 0}), DomainError);
    CHECK_THROWS_AS(residue_reduce(Base(3), 2, {1}), DomainError);
    CHECK_THROWS_AS(residue_reduce(Base(3), 2, {-1, 2}), DomainError);
}

TEST_CASE("folding power sums into A(b,k,t)") {
    const FoldResult a = reduce_to_A(Base(3), 2, {0, 2});
    CHECK(a.w == 10);
    CHECK(a.c_w == 2);
    CHECK_FALSE(a.multiple);
    const FoldResult b = reduce_to_A(Base(3), 2, {5});
    CHECK(b.w == 243);
    CHECK(b.c_w == 3);
    const FoldResult c = reduce_to_A(Base(2), 3, {0, 1, 2});
    CHECK(c.c_w == 7);
    CHECK(c.multiple);
}

TEST_CASE("sums of t powers avoid multiples of b^k - 1") {
    CHECK(no_multiples_check(Base(3), 2, 2, 4).holds);
    const NoMultiplesResult bad = no_multiples_check(Base(2), 3, 3, 3);
    CHECK_FALSE(bad.holds);
    CHECK(bad.counterexample == Integer(7));
    CHECK(no_multiples_check(Base(2), 2, 1, 5).holds);
    for (long b = 2; b <= 4; ++b)
        for (long t = 1; t <= 4; ++t) {
            const long k = t / (b - 1) + 1;
            CHECK(no_multiples_check(Base(b), k, t, 6).holds);
        }
}
