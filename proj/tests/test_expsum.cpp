#include <catch_amalgamated.hpp>

#include "near.hpp"
#include "radix_approx/expsum.hpp"

using namespace radix_approx;

namespace {
RealValue g(const char* s) { return parse_real(s); }
}  // namespace

TEST_CASE("trivial sums") {
    const ExpSumReport a = eval_expsum(Base(2), 0, 1, g("1/2"), false);
    CHECK(near(a.value.re, "0"));
    CHECK(near(a.value.im, "0"));
    CHECK(a.terms == 2);

    for (long r : {0L, 3L, 7L}) {
        const ExpSumReport z = eval_expsum(Base(3), r, 5, g("0"), false);
        CHECK(near(z.magnitude, std::to_string(1L << (r + 1)).c_str()));
    }
    const ExpSumReport q = eval_expsum(Base(2), 1, 1, g("1/4"), false);
    CHECK(near(q.magnitude, "0"));
}

TEST_CASE("direct sums match an independent evaluation") {
    struct Row {
        long b, r, k;
        const char* gamma;
        const char* re;
        const char* im;
        const char* modulus;
    };
    const Row rows[] = {
        {3, 5, 2, "1/7", "1", "0", "1"},
        {2, 10, 3, "5/17", "-0.43247222940435580457", "-0.26777546763316437577", "0.50866091875839411259"},
        {5, 4, 7, "12/1001", "0.0047944794359627067541", "-0.039486090646258901036", "0.039776103222744733213"},
        {10, 6, 1, "1/3", "0.5", "0.86602540378443864676", "1"},
    };
    for (const Row& row : rows) {
        INFO("b=" << row.b << " r=" << row.r << " k=" << row.k << " gamma=" << row.gamma);
        const ExpSumReport rep = eval_expsum(Base(row.b), row.r, row.k, g(row.gamma), false);
        CHECK(rep.terms == (std::uint64_t{1} << (row.r + 1)));
        CHECK(near(rep.value.re, row.re, "1e-15"));
        CHECK(near(rep.value.im, row.im, "1e-15"));
        CHECK(near(rep.magnitude, row.modulus, "1e-15"));
        // |sum| = 2^(r+1) prod |cos(pi k b^d gamma)|
        CHECK(near(rep.product_magnitude, row.modulus, "1e-15"));
        CHECK(rep.magnitude.lower() <= rep.cosine_bound.upper() + Rational::parse("1e-9"));
    }
}

TEST_CASE("excluding j = 0 removes one unit term") {
    const ExpSumReport full = eval_expsum(Base(3), 5, 2, g("1/7"), false);
    const ExpSumReport part = eval_expsum(Base(3), 5, 2, g("1/7"), true);
    CHECK(part.terms + 1 == full.terms);
    CHECK(near(part.value.re, "0", "1e-15"));
}

TEST_CASE("sums over irrational gamma carry the input radius") {
    const ExpSumReport rep = eval_expsum(Base(2), 8, 1, g("sqrt2"), false);
    CHECK(rep.value.re.radius() > Rational(0));
    CHECK(near(rep.magnitude, rep.product_magnitude.center().str().c_str(), "1e-12"));
}

TEST_CASE("term cap") {
    ExpSumOptions opt;
    opt.max_r = 10;
    CHECK_THROWS_AS(eval_expsum(Base(2), 11, 1, g("1/3"), false, opt), ResourceLimitError);
    CHECK_THROWS_AS(eval_expsum(Base(2), -1, 1, g("1/3"), false), DomainError);
}

TEST_CASE("G classes") {
    CHECK(classify_G(Base(2), g("1/2")).t == 1);
    CHECK(classify_G(Base(2), g("1/5")).t == 2);
    CHECK(classify_G(Base(3), g("1/10")).t == 2);
    CHECK_FALSE(classify_G(Base(3), g("3")).t);
    CHECK(classify_G(Base(2), g("-1/5")).t == 2);
    CHECK_THROWS_AS(classify_G(Base(2), g("1/4+-1/100")), IndeterminateError);
}

TEST_CASE("hypothesis check") {
    const HypothesisResult bad = hypothesis_check(Base(2), 1, Rational(1, 10), g("1/3"));
    CHECK_FALSE(bad.holds);
    REQUIRE(bad.counterexample);
    CHECK(*bad.counterexample == 3);
    CHECK(hypothesis_check(Base(2), 1, Rational(1, 10), g("1/5")).holds);
    // the generic path (approximate gamma) agrees with the residue path
    CHECK(hypothesis_check(Base(2), 1, Rational(1, 10), g("1/3+-1/10000")).counterexample == Integer(3));
}

TEST_CASE("small shift count") {
    const ShiftCount a = small_shift_count(Base(2), 1, 1, g("1/5"), Rational(1, 10));
    CHECK(a.g == 0);
    CHECK(a.hypothesis_holds);
    const ShiftCount b = small_shift_count(Base(3), 2, 1, g("1/27"), Rational(1, 10));
    // ||3^d / 27|| = 1/27, 1/9, 1/3 and only the first is <= 1/10
    CHECK(b.g == 1);
    CHECK(b.d_list == std::vector<long>{0});
    CHECK_FALSE(b.hypothesis_holds);
    CHECK(below_three_sqrt(2, 1));
    CHECK_FALSE(below_three_sqrt(3, 1));
}

TEST_CASE("decay bound values") {
    CHECK(near(decay_bound(Base(2), 1, 1, 1), "19.909153062526809982"));
    CHECK(near(decay_bound(Base(2), 1, 1, 2), "17.847869592767338452"));
    CHECK(near(decay_bound(Base(3), 10, 4, 2), "6520.0355678488271297", "1e-15"));
    CHECK(near(decay_bound(Base(10), 8, 64, 3), "2130.3550163116022288", "1e-15"));
}

TEST_CASE("decay check") {
    const ExpSumReport ok = decay_check(Base(2), 1, 1, 2, g("2/5"));
    REQUIRE(ok.decay_bound);
    CHECK(*ok.hypothesis_beta == Rational(1, 8));
    CHECK(ok.magnitude.upper() <= ok.decay_bound->upper());
    CHECK(ok.V_set->size() == 2);

    CHECK_THROWS_AS(decay_check(Base(2), 1, 1, 2, g("1/3")), HypothesisViolation);
    try {
        decay_check(Base(2), 1, 1, 2, g("1/3"));
    } catch (const HypothesisViolation& e) {
        CHECK(std::string(e.what()).find("1/(2 b^m)") != std::string::npos);
    }
    const ExpSumReport small = decay_check(Base(2), 0, 1, 1, g("1/3"));
    CHECK(near(*small.decay_bound, "12.386699239597520531"));
}
