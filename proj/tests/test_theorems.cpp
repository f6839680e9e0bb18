#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "genconvex/errors.hpp"
#include "genconvex/theorems.hpp"

using namespace genconvex;

namespace {

FuncDef fx(const std::string& text, Interval d = {0.0, 1.0}) { return from_expression(text, d); }
const FuncDef& id() {
    static const FuncDef phi = identity_phi();
    return phi;
}
const FuncDef& ht() {
    static const FuncDef h = fx("t");
    return h;
}

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void check_close(const Verdict& v, double lhs, double rhs, double tol = 1e-9) {
    CHECK(std::fabs(v.lhs - lhs) <= tol);
    CHECK(std::fabs(v.rhs - rhs) <= tol);
    CHECK(v.margin == v.rhs - v.lhs);
    CHECK(v.quad_err >= 0.0);
}

}  // namespace

TEST_CASE("T2_1 examples") {
    const Verdict a = verify_t2_1(fx("x"), ht(), 1.0, id(), 0.0, 1.0);
    check_close(a, 1.0 / 6, 1.0 / 6);
    CHECK(a.status == Status::Pass);
    CHECK(std::fabs(a.margin) <= 1e-9);

    const Verdict b = verify_t2_1(fx("x"), ht(), 0.5, id(), 0.0, 1.0);
    check_close(b, 1.0 / 24, 1.0 / 24);
    CHECK(b.status == Status::Pass);

    const Verdict z = verify_t2_1(fx("0"), fx("t^2"), 0.3, id(), 0.2, 1.0);
    check_close(z, 0.0, 0.0, 0.0);
    CHECK(z.status == Status::Pass);
}

TEST_CASE("T2_2dot examples") {
    const Verdict a = verify_t2_2dot(fx("x^2"), ht(), 1.0, id(), 0.0, 1.0);
    check_close(a, 1.0 / 3, 0.5);
    CHECK(std::fabs(a.margin - 1.0 / 6) <= 1e-9);
    CHECK(a.status == Status::Pass);
    check_close(verify_t2_2dot(fx("x"), ht(), 1.0, id(), 0.0, 1.0), 0.5, 0.5);
    const Verdict c = verify_t2_2dot(fx("2.5"), ht(), 1.0, id(), 0.0, 1.0);
    check_close(c, 2.5, 2.5);
    CHECK(c.status == Status::Pass);
}

TEST_CASE("T2_2 examples") {
    const Verdict a = verify_t2_2(fx("x"), ht(), 0.5, id(), 0.4, 1.0);
    check_close(a, 0.7, 0.7);
    CHECK(a.status == Status::Pass);
    check_close(verify_t2_2(fx("x^2"), ht(), 1.0, id(), 0.0, 1.0), 1.0 / 3, 0.5);
    check_close(verify_t2_2(fx("0"), ht(), 0.5, id(), 0.4, 1.0), 0.0, 0.0, 0.0);
    // ordering chain violated: phi(x) > m phi(y)
    CHECK_THROWS(verify_t2_2(fx("x"), ht(), 0.5, id(), 0.6, 1.0));
}

TEST_CASE("T2_3 examples") {
    const Verdict a = verify_t2_3(fx("x"), fx("x"), ht(), 1.0, id(), 0.0, 1.0);
    check_close(a, 1.0 / 3, 1.0 / 3);
    CHECK(a.status == Status::Pass);
    const Verdict b = verify_t2_3(fx("x^2"), fx("x"), ht(), 1.0, id(), 0.0, 1.0);
    check_close(b, 0.25, 1.0 / 3);
    CHECK(b.status == Status::Pass);
    check_close(verify_t2_3(fx("0"), fx("0"), ht(), 0.7, id(), 0.0, 1.0), 0.0, 0.0, 0.0);
}

TEST_CASE("background examples") {
    const Verdict hc = verify_hc(fx("x^2"), 0.0, 1.0);
    check_close(hc, 1.0 / 3, 0.5);
    REQUIRE(hc.lower);
    CHECK(std::fabs(hc.lower->bound - 0.25) <= 1e-15);
    CHECK(hc.lower->margin > 0.0);
    CHECK(hc.status == Status::Pass);

    const Verdict t19 = verify_t1_9(fx("x^2"), ht(), 0.0, 1.0);
    REQUIRE(t19.lower);
    CHECK(std::fabs(t19.lower->bound - 0.25) <= 1e-15);
    check_close(t19, 1.0 / 3, 0.5);
    CHECK_THROWS_AS(verify_t1_9(fx("x^2"), fx("abs(t - 0.5)"), 0.0, 1.0), InvalidArgument);

    const Verdict t113 = verify_t1_13(fx("x"), ht(), id(), 0.0, 1.0);
    check_close(t113, 1.0 / 6, 1.0 / 6);

    check_close(verify_t1_14(fx("x^2"), fx("x"), ht(), id(), 0.0, 1.0), 0.25, 1.0 / 3);
    check_close(verify_t1_11(fx("x"), ht(), 1.0, 0.0, 1.0), 0.5, 0.5);
}

TEST_CASE("two-sided verdicts fail on either side") {
    // concave f breaks the upper Hermite-Hadamard bound
    const Verdict v = verify_hc(fx("sqrt(x)"), 0.0, 1.0);
    CHECK(v.status == Status::Fail);
    CHECK(v.margin < 0.0);
    // f = -x^2 + 1 is concave: the lower (midpoint) bound fails as well
    const Verdict w = verify_hc(fx("1 - x^2"), 0.0, 1.0);
    CHECK(w.status == Status::Fail);
    REQUIRE(w.lower);
    CHECK(w.lower->margin < 0.0);
}

TEST_CASE("orientation errors and indeterminate verdicts") {
    CHECK_THROWS_AS(verify_t2_1(fx("x"), ht(), 0.5, id(), 0.6, 1.0), OrientationError);
    CHECK_THROWS_AS(verify_t2_2dot(fx("x"), ht(), 1.0, id(), 1.0, 1.0), OrientationError);
    CHECK_THROWS_AS(verify_hc(fx("x"), 1.0, 0.0), OrientationError);

    // Godunova-Levin h is not integrable
    const Verdict gl = verify_t2_2dot(fx("x^2"), catalog("recip_power", {1.0}, {0.0, 1.0}), 1.0, id(), 0.0, 1.0);
    CHECK(gl.status == Status::Indeterminate);
    CHECK_FALSE(gl.diagnosis.empty());

    // f undefined inside the integration interval
    const Verdict bad = verify_t2_2dot(fx("1/(x - 0.5)"), ht(), 1.0, id(), 0.0, 1.0);
    CHECK(bad.status == Status::Indeterminate);
}

TEST_CASE("status thresholds follow quad_err + report tolerance") {
    Tolerances loose;
    loose.report = 0.2;
    // sqrt fails HC by 2/3 - 1/2 = 1/6 < 0.2
    CHECK(verify_hc(fx("sqrt(x)"), 0.0, 1.0, loose).status == Status::Pass);
    Tolerances tight;
    tight.report = 0.1;
    CHECK(verify_hc(fx("sqrt(x)"), 0.0, 1.0, tight).status == Status::Fail);
}

TEST_CASE("property: linear tightness with h = t") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 40; ++i) {
        const double k = 2 * u(rng), c = u(rng);
        const double k2 = 2 * u(rng), c2 = u(rng);
        const FuncDef f = fx(num(k) + "*x + " + num(c)), g = fx(num(k2) + "*x + " + num(c2));
        const double x = 0.3 * u(rng), y = 0.6 + 0.4 * u(rng);
        for (const Verdict& v : {verify_t2_1(f, ht(), 1.0, id(), x, y), verify_t2_2dot(f, ht(), 1.0, id(), x, y),
                                 verify_t2_2(f, ht(), 1.0, id(), x, y), verify_t2_3(f, g, ht(), 1.0, id(), x, y)}) {
            CAPTURE(to_string(v.theorem));
            CHECK(std::fabs(v.margin) <= v.quad_err + 1e-9);
        }
    }
}

TEST_CASE("property: homogeneity in f") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    const Tolerances tol;
    for (int i = 0; i < 30; ++i) {
        // powers of two keep lambda f exact in floating point
        const double lambda = std::ldexp(1.0, static_cast<int>(rng() % 9) - 4);
        const std::string base = "exp(" + num(u(rng)) + "*x)";
        const FuncDef f = fx(base), lf = fx(num(lambda) + "*" + base);
        const double m = 0.4 + 0.6 * (u(rng) / 3.0);
        const Verdict a = verify_t2_2dot(f, fx("t^2"), m, id(), 0.1, 1.0, tol);
        const Verdict b = verify_t2_2dot(lf, fx("t^2"), m, id(), 0.1, 1.0, tol);
        CHECK(b.lhs == lambda * a.lhs);
        CHECK(b.rhs == lambda * a.rhs);
        CHECK(a.status == b.status);
        const Verdict c = verify_t2_1(f, ht(), m, id(), 0.1, 1.0, tol);
        const Verdict d = verify_t2_1(lf, ht(), m, id(), 0.1, 1.0, tol);
        CHECK(d.lhs == doctest::Approx(lambda * lambda * c.lhs).epsilon(1e-14));
        CHECK(d.rhs == doctest::Approx(lambda * lambda * c.rhs).epsilon(1e-14));
        CHECK(c.status == d.status);
    }
}

TEST_CASE("property: T2_1 left side is symmetric under reflection") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 30; ++i) {
        const double m = 0.5 + 0.5 * u(rng), x = 0.2 * u(rng), y = 0.5 + 0.5 * u(rng);
        const double s = x + m * y;
        const FuncDef f = fx("x^3 + exp(x)");
        const FuncDef r = fx("(" + num(s) + " - x)^3 + exp(" + num(s) + " - x)");
        const Verdict a = verify_t2_1(f, ht(), m, id(), x, y);
        const double Ir = integrate([&](double v) { return f(v) * r(v); }, x, m * y).value / (m * y - x);
        CHECK(std::fabs(a.lhs - Ir) <= 2 * a.quad_err + 1e-13);
    }
}

TEST_CASE("verdict echoes inputs") {
    const Verdict v = verify_t2_3(fx("x^2"), fx("x"), ht(), 1.0, id(), 0.0, 1.0);
    CHECK(v.input("m").value() == 1.0);
    CHECK(v.input("x").value() == 0.0);
    CHECK(v.input("M").value() == 1.0);
    CHECK(v.input("N").value() == 0.0);
    CHECK_FALSE(v.input("nope"));
    CHECK(v.functions.size() >= 3);
}

TEST_CASE("verify dispatch matches direct calls") {
    TheoremInputs in{fx("x^2"), fx("x"), ht(), 1.0, id(), 0.0, 1.0};
    CHECK(verify(TheoremId::T2_3, in).lhs == verify_t2_3(in.f, *in.g, in.h, 1.0, id(), 0.0, 1.0).lhs);
    CHECK(verify(TheoremId::HC, in).rhs == verify_hc(in.f, 0.0, 1.0).rhs);
    for (auto id : {TheoremId::HC, TheoremId::T1_9, TheoremId::T1_11, TheoremId::T1_13, TheoremId::T1_14,
                    TheoremId::T2_1, TheoremId::T2_2dot, TheoremId::T2_2, TheoremId::T2_3})
        CHECK(parse_theorem_id(to_string(id)) == id);
    in.g.reset();
    CHECK_THROWS(verify(TheoremId::T2_3, in));
}

TEST_CASE("reduction examples") {
    const std::vector<TheoremInputs> one{{fx("x"), fx("x"), ht(), 1.0, id(), 0.0, 1.0}};
    const ReductionReport a = check_reduction(ReductionPair::T2_1_T1_13, one);
    CHECK(a.pass);
    CHECK(a.max_lhs_deviation <= 1e-12);
    CHECK(a.max_rhs_deviation <= 1e-12);

    const std::vector<TheoremInputs> sq{{fx("x^2"), std::nullopt, ht(), 1.0, id(), 0.0, 1.0}};
    const ReductionReport b = check_reduction(ReductionPair::T2_2dot_T1_9, sq);
    CHECK(b.pass);
    REQUIRE(b.verdicts.size() == 1);
    CHECK(std::fabs(b.verdicts[0].first.rhs - 0.5) <= 1e-12);
    CHECK(std::fabs(b.verdicts[0].second.rhs - 0.5) <= 1e-12);

    CHECK(check_reduction(ReductionPair::T2_3_T1_14, one).pass);
    const std::vector<TheoremInputs> t22{{fx("x^2"), std::nullopt, ht(), 0.5, id(), 0.4, 1.0}};
    CHECK(check_reduction(ReductionPair::T2_2_T1_11, t22).pass);
    CHECK(parse_reduction_pair(to_string(ReductionPair::T2_2_T1_11)) == ReductionPair::T2_2_T1_11);
}
