#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "genconvex/classes.hpp"
#include "genconvex/errors.hpp"
#include "genconvex/probe_kernels.hpp"

using namespace genconvex;

namespace {

FuncDef fx(const char* text, Interval d = {0.0, 1.0}) { return from_expression(text, d); }

ClassSpec convex() { return ClassSpec::make(ClassTag::Convex); }

ClassSpec hm(const char* h, double m, double bound = 1.0) {
    return ClassSpec::make(ClassTag::HMConvex, fx(h), m, std::nullopt, bound);
}

// Analytic defect for convexity with f = u^2: t(1-t)(x-y)^2.
double square_defect(double x, double y, double t) { return t * (1 - t) * (x - y) * (x - y); }

}  // namespace

TEST_CASE("defect examples") {
    CHECK(defect(fx("x^2"), convex(), 0.0, 1.0, 0.5) == 0.25);
    CHECK(std::fabs(defect(fx("sqrt(x)"), convex(), 0.0, 1.0, 0.5) - (0.5 - std::sqrt(0.5))) <= 1e-15);

    const FuncDef lin = fx("x");
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double x = u(rng), y = u(rng), t = 0.01 + 0.98 * u(rng);
        CHECK(std::fabs(defect(lin, convex(), x, y, t)) <= 1e-15);
    }

    const DefectSample s = defect_sample(fx("x^2"), convex(), 0.0, 1.0, 0.5);
    CHECK(s.lhs == 0.25);
    CHECK(s.rhs == 0.5);
    CHECK(s.defect == s.rhs - s.lhs);
}

TEST_CASE("defect agrees with the closed form for u^2") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const FuncDef sq = fx("x^2");
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng), y = u(rng), t = 1e-6 + (1 - 2e-6) * u(rng);
        CHECK(std::fabs(defect(sq, convex(), x, y, t) - square_defect(x, y, t)) <= 4e-16);
    }
}

TEST_CASE("defect preconditions raise domain errors") {
    CHECK_THROWS_AS(defect(fx("x^2"), convex(), 1.5, 0.0, 0.5), DomainError);
    CHECK_THROWS_AS(defect(fx("x^2"), convex(), 0.0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(defect(fx("x^2"), convex(), 0.0, 1.0, 1.0), DomainError);
    // phi leaves [0, B]
    const ClassSpec phi2 = ClassSpec::make(ClassTag::PhiConvex, std::nullopt, std::nullopt, fx("2*x"));
    CHECK_THROWS_AS(defect(fx("x^2"), phi2, 0.9, 0.1, 0.5), DomainError);
    // f undefined at the blend point
    const FuncDef ln = fx("ln(x)");
    DefectSample out;
    CHECK(try_defect(ln, convex(), Triple{0.0, 1.0, 0.5}, out) == ProbeStatus::FUndefined);
}

TEST_CASE("ClassSpec enforces tag consistency") {
    CHECK_THROWS_AS(ClassSpec::make(ClassTag::Convex, fx("1")), InvalidArgument);
    CHECK_THROWS_AS(ClassSpec::make(ClassTag::Convex, std::nullopt, 0.5), InvalidArgument);
    CHECK_THROWS_AS(ClassSpec::make(ClassTag::MConvex, std::nullopt, 1.5), InvalidArgument);
    CHECK_THROWS_AS(ClassSpec::make(ClassTag::MConvex, std::nullopt, 0.0), InvalidArgument);
    CHECK_THROWS_AS(ClassSpec::make(ClassTag::HConvex, fx("t-1")), InvalidArgument);
    CHECK_THROWS_AS(ClassSpec::make(ClassTag::HConvex, fx("0")), InvalidArgument);
    CHECK_THROWS_AS(ClassSpec::make(ClassTag::HMConvex, std::nullopt, std::nullopt, fx("x/2")),
                    InvalidArgument);
    CHECK_THROWS_AS(ClassSpec::make(ClassTag::PhiHMConvex, std::nullopt, 0.5, std::nullopt, 0.0),
                    InvalidArgument);
    // explicitly passing the pinned values is fine
    CHECK_NOTHROW(ClassSpec::make(ClassTag::Convex, fx("t"), 1.0, fx("x")));
    CHECK(ClassSpec::make(ClassTag::MConvex, std::nullopt, 0.5).m == 0.5);
    CHECK(parse_class_tag("phi_hm_convex") == ClassTag::PhiHMConvex);
    CHECK_THROWS_AS(parse_class_tag("s_convex"), InvalidArgument);
    for (auto tag : {ClassTag::Convex, ClassTag::MConvex, ClassTag::HConvex, ClassTag::HMConvex,
                     ClassTag::PhiConvex, ClassTag::PhiHConvex, ClassTag::PhiHMConvex})
        CHECK(parse_class_tag(to_string(tag)) == tag);
    CHECK_FALSE(reading_notes(ClassSpec::make(ClassTag::PhiConvex)).empty());
}

TEST_CASE("falsify examples") {
    const FalsifyReport r = falsify(fx("sqrt(x)"), convex(), 10'000, 42);
    REQUIRE(r.counterexample);
    CHECK(r.counterexample->defect <= -0.2);
    // the exact infimum of t*0 + (1-t)*1 - sqrt(1-t) is -1/4
    CHECK(r.counterexample->defect >= -0.25 - 1e-12);
    CHECK(r.counterexample->defect == r.counterexample->rhs - r.counterexample->lhs);
    CHECK(r.counterexample->t > 0.0);
    CHECK(r.counterexample->t < 1.0);
    CHECK(r.probes <= 10'000);

    CHECK_FALSE(falsify(fx("x^2"), convex(), 10'000, 42).counterexample);

    const FalsifyReport hs = falsify(fx("x^2"), ClassSpec::make(ClassTag::HConvex, fx("t^2")), 10'000, 1);
    REQUIRE(hs.counterexample);
    CHECK(hs.counterexample->defect <= -0.125 + 1e-12);
    CHECK(std::fabs(defect(fx("x^2"), ClassSpec::make(ClassTag::HConvex, fx("t^2")), 0.5, 0.5, 0.5) + 0.125) <= 1e-15);
}

TEST_CASE("falsify is deterministic and seed-sensitive") {
    const FuncDef f = fx("sqrt(x) + x^3");
    const FalsifyReport a = falsify(f, convex(), 5000, 9), b = falsify(f, convex(), 5000, 9);
    REQUIRE(a.counterexample);
    CHECK(a.counterexample->defect == b.counterexample->defect);
    CHECK(a.worst == b.worst);
    CHECK(a.probes == b.probes);
    CHECK_NOTHROW(falsify(f, convex(), 1, 0));
}

TEST_CASE("certify examples") {
    const CertifyReport sq = certify_sampled(fx("x^2"), convex(), 10'000, 0);
    CHECK(sq.certified);
    CHECK(sq.min_defect >= -1e-15);
    CHECK(sq.note == "sampled evidence, not a proof");
    CHECK(sq.samples_ok >= 10'000);

    const CertifyReport c = certify_sampled(fx("3"), convex(), 2000, 5);
    CHECK(c.certified);
    CHECK(std::fabs(c.min_defect) <= 1e-15);

    const ClassSpec p = ClassSpec::make(ClassTag::HConvex, fx("1"));
    const CertifyReport pr = certify_sampled(fx("x^2"), p, 10'000, 0);
    CHECK(pr.certified);
    CHECK(std::fabs(pr.min_defect) <= 1e-15);

    CHECK_FALSE(certify_sampled(fx("sqrt(x)"), convex(), 1000, 0).certified);
}

TEST_CASE("certify enforces non-negativity only where the class demands it") {
    const FuncDef neg = fx("x - 2");  // affine, negative on [0,1]
    CHECK(certify_sampled(neg, convex(), 500, 0).certified);
    const CertifyReport r = certify_sampled(neg, ClassSpec::make(ClassTag::HConvex), 500, 0);
    CHECK_FALSE(r.nonnegative);
    CHECK_FALSE(r.certified);
}

TEST_CASE("brute-force grid oracle bounds the sampled minimum") {
    // min over a dense grid of the same quantity certify reports
    const FuncDef f = fx("x^3 - x");
    const ClassSpec spec = hm("t", 0.5);
    double grid_min = INFINITY;
    for (int i = 0; i <= 40; ++i)
        for (int j = 0; j <= 40; ++j)
            for (int k = 1; k < 40; ++k) grid_min = std::min(grid_min, defect(f, spec, i / 40.0, j / 40.0, k / 40.0));
    const CertifyReport r = certify_sampled(f, spec, 10'000, 3);
    // the sampled minimum cannot beat the true infimum by more than grid resolution effects
    CHECK(r.min_defect <= 0.0);
    CHECK(r.min_defect >= grid_min - 0.05);
    CHECK_FALSE(r.certified);
}

TEST_CASE("property: scaling, additivity and h-dominance of the defect") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::vector<const char*> fs = {"x^2", "exp(x)", "sqrt(x)", "x^3 + 1", "abs(x - 0.3)"};
    const ClassSpec lo = hm("t", 0.7), hi = hm("1", 0.7);
    for (int i = 0; i < 1000; ++i) {
        const FuncDef f = fx(fs[rng() % fs.size()]), g = fx(fs[rng() % fs.size()]);
        const double lambda = 0.1 + 5 * u(rng);
        const double x = u(rng), y = u(rng), t = 0.001 + 0.998 * u(rng);

        const double df = defect(f, lo, x, y, t), dg = defect(g, lo, x, y, t);

        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", lambda);
        const FuncDef lf = fx((std::string(buf) + "*(" + fs[i % fs.size()] + ")").c_str());
        const double dlf = defect(lf, lo, x, y, t);
        const double d0 = defect(fx(fs[i % fs.size()]), lo, x, y, t);
        CHECK(std::fabs(dlf - lambda * d0) <= 1e-12 * (1 + lambda));

        const FuncDef sum = fx((std::string("(") + fs[i % fs.size()] + ")+(" + fs[(i + 1) % fs.size()] + ")").c_str());
        const double d1 = defect(fx(fs[(i + 1) % fs.size()]), lo, x, y, t);
        CHECK(std::fabs(defect(sum, lo, x, y, t) - (d0 + d1)) <= 1e-12);

        // h-dominance: t <= 1 so the h = 1 defect is no smaller
        CHECK(defect(f, hi, x, y, t) >= df);
        CHECK(defect(g, hi, x, y, t) >= dg);
    }
}

TEST_CASE("reduction consistency is bit-for-bit") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const FuncDef f = fx("exp(x) + x^2");
    const FuncDef h = fx("t^0.5");
    const ClassSpec full_h = ClassSpec::make(ClassTag::PhiHMConvex, h, 1.0, fx("x"));
    const ClassSpec hconv = ClassSpec::make(ClassTag::HConvex, h);
    const ClassSpec full_m = ClassSpec::make(ClassTag::PhiHMConvex, fx("t"), 0.4, fx("x"));
    const ClassSpec mconv = ClassSpec::make(ClassTag::MConvex, std::nullopt, 0.4);
    for (int i = 0; i < 1000; ++i) {
        const double x = u(rng), y = u(rng), t = 0.001 + 0.998 * u(rng);
        CHECK(defect(f, full_h, x, y, t) == defect(f, hconv, x, y, t));
        CHECK(defect(f, full_m, x, y, t) == defect(f, mconv, x, y, t));
    }
}

TEST_CASE("parallel probe scan equals the serial reference") {
    const ClassSpec spec = hm("t^0.5", 0.6, 2.0);
    for (const char* text : {"x^2", "sqrt(x)", "ln(x)", "1", "x^3 - 2*x"}) {
        CAPTURE(text);
        const FuncDef f = from_expression(text, {0.0, 2.0});
        for (std::size_t n : {0u, 1u, 7u, 1000u, 20'000u}) {
            const std::vector<Triple> probes = certify_probes(spec, n, n + 1);
            const ProbeSummary s = scan_probes_serial(f, spec, probes);
            const ProbeSummary p = scan_probes_parallel(f, spec, probes);
            CHECK(s == p);
            CHECK(s.evaluated + s.skipped == probes.size());
        }
    }
}

TEST_CASE("certify probes respect the open t interval") {
    const ClassSpec spec = hm("t", 1.0, 3.0);
    for (const Triple& p : certify_probes(spec, 5000, 8)) {
        CHECK(p.t > 0.0);
        CHECK(p.t < 1.0);
        CHECK(p.x >= 0.0);
        CHECK(p.x <= 3.0);
        CHECK(p.y >= 0.0);
        CHECK(p.y <= 3.0);
    }
    CHECK(certify_probes(spec, 100, 1) == certify_probes(spec, 100, 1));
    CHECK_FALSE(certify_probes(spec, 100, 1) == certify_probes(spec, 100, 2));
}
