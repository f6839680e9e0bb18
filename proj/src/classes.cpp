#include "genconvex/classes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include "genconvex/errors.hpp"
#include "genconvex/probe_kernels.hpp"
#include "genconvex/rng.hpp"

namespace genconvex {

namespace {

struct TagInfo {
    ClassTag tag;
    std::string_view name;
    bool h;
    bool m;
    bool phi;
    bool nonneg;
};

// Which parameters each class leaves free, and whether it demands f >= 0.
constexpr std::array<TagInfo, 7> kTags{{
    {ClassTag::Convex, "convex", false, false, false, false},
    {ClassTag::MConvex, "m_convex", false, true, false, false},
    {ClassTag::HConvex, "h_convex", true, false, false, true},
    {ClassTag::HMConvex, "hm_convex", true, true, false, true},
    {ClassTag::PhiConvex, "phi_convex", false, false, true, false},
    {ClassTag::PhiHConvex, "phi_h_convex", true, false, true, true},
    {ClassTag::PhiHMConvex, "phi_hm_convex", true, true, true, true},
}};

const TagInfo& info(ClassTag tag) noexcept {
    for (const auto& i : kTags)
        if (i.tag == tag) return i;
    return kTags[0];
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

constexpr int kCheckGrid = 64;

}  // namespace

std::string_view to_string(ClassTag tag) noexcept { return info(tag).name; }

ClassTag parse_class_tag(std::string_view name) {
    for (const auto& i : kTags)
        if (i.name == name) return i.tag;
    throw InvalidArgument("unknown class tag '" + std::string(name) + "'");
}

bool uses_h(ClassTag tag) noexcept { return info(tag).h; }
bool uses_m(ClassTag tag) noexcept { return info(tag).m; }
bool uses_phi(ClassTag tag) noexcept { return info(tag).phi; }
bool requires_nonnegative(ClassTag tag) noexcept { return info(tag).nonneg; }

ClassSpec ClassSpec::make(ClassTag tag, std::optional<FuncDef> h, std::optional<double> m,
                          std::optional<FuncDef> phi, double bound) {
    const std::string name(to_string(tag));
    if (!(bound > 0.0) || !std::isfinite(bound))
        throw InvalidArgument(name + ": domain bound B must be finite and positive");

    if (m) {
        if (!(*m > 0.0 && *m <= 1.0)) throw InvalidArgument(name + ": m must lie in (0, 1]");
        if (!uses_m(tag) && *m != 1.0) throw InvalidArgument(name + " pins m = 1, got " + fmt(*m));
    }

    if (h) {
        bool nonzero = false;
        for (int i = 1; i < kCheckGrid; ++i) {
            const double t = static_cast<double>(i) / kCheckGrid;
            auto v = h->try_evaluate(t);
            if (!v) throw InvalidArgument(name + ": h undefined at t = " + fmt(t));
            if (*v < 0.0) throw InvalidArgument(name + ": h is negative at t = " + fmt(t));
            if (!uses_h(tag) && *v != t)
                throw InvalidArgument(name + " pins h(t) = t, but h(" + fmt(t) + ") = " + fmt(*v));
            nonzero = nonzero || *v != 0.0;
        }
        if (!nonzero) throw InvalidArgument(name + ": h vanishes on (0, 1)");
    }

    if (phi && !uses_phi(tag)) {
        for (int i = 0; i <= kCheckGrid; ++i) {
            const double u = bound * i / kCheckGrid;
            auto v = phi->try_evaluate(u);
            if (!v || *v != u)
                throw InvalidArgument(name + " pins phi to the identity, but phi(" + fmt(u) + ") = " +
                                      (v ? fmt(*v) : std::string("undefined")));
        }
    }

    return ClassSpec{
        tag,
        h ? *h : catalog("identity", {}, {0.0, 1.0}),
        m.value_or(1.0),
        phi ? *phi : catalog("identity", {}, {0.0, bound}),
        bound,
    };
}

std::vector<std::string> reading_notes(const ClassSpec& spec) {
    std::vector<std::string> notes;
    if (spec.tag == ClassTag::PhiConvex)
        notes.emplace_back(
            "phi_convex uses the standard reading t f(phi(x)) + (1 - t) f(phi(y)) of the right-hand side");
    if (uses_phi(spec.tag))
        notes.emplace_back("phi must map [0, B] into [0, B]; out-of-range images are reported as domain errors");
    return notes;
}

std::string_view to_string(ProbeStatus status) noexcept {
    switch (status) {
        case ProbeStatus::Ok: return "ok";
        case ProbeStatus::PointOutside: return "probe point outside [0, B] x [0, B] x (0, 1)";
        case ProbeStatus::PhiUndefined: return "phi undefined";
        case ProbeStatus::PhiOutOfRange: return "phi image outside [0, B]";
        case ProbeStatus::HUndefined: return "h undefined";
        case ProbeStatus::FUndefined: return "f undefined";
    }
    return "?";
}

ProbeStatus try_defect(const FuncDef& f, const ClassSpec& spec, const Triple& p,
                       DefectSample& out) noexcept {
    const Interval dom = spec.domain();
    if (!dom.contains(p.x) || !dom.contains(p.y) || !(p.t > 0.0 && p.t < 1.0))
        return ProbeStatus::PointOutside;
    const auto px = spec.phi.try_evaluate(p.x);
    const auto py = spec.phi.try_evaluate(p.y);
    if (!px || !py) return ProbeStatus::PhiUndefined;
    if (!dom.contains(*px) || !dom.contains(*py)) return ProbeStatus::PhiOutOfRange;
    const auto ht = spec.h.try_evaluate(p.t);
    const auto hs = spec.h.try_evaluate(1.0 - p.t);
    if (!ht || !hs) return ProbeStatus::HUndefined;
    const double blend = p.t * *px + spec.m * (1.0 - p.t) * *py;
    const auto fx = f.try_evaluate(*px);
    const auto fy = f.try_evaluate(*py);
    const auto fb = f.try_evaluate(blend);
    if (!fx || !fy || !fb) return ProbeStatus::FUndefined;
    out.lhs = *fb;
    out.rhs = *ht * *fx + spec.m * *hs * *fy;
    out.defect = out.rhs - out.lhs;
    out.min_value = std::min({*fx, *fy, *fb});
    if (!std::isfinite(out.rhs) || !std::isfinite(out.defect)) return ProbeStatus::FUndefined;
    return ProbeStatus::Ok;
}

DefectSample defect_sample(const FuncDef& f, const ClassSpec& spec, double x, double y, double t) {
    DefectSample s;
    const ProbeStatus st = try_defect(f, spec, {x, y, t}, s);
    if (st != ProbeStatus::Ok)
        throw DomainError("defect at (x, y, t) = (" + fmt(x) + ", " + fmt(y) + ", " + fmt(t) +
                          "): " + std::string(to_string(st)));
    return s;
}

double defect(const FuncDef& f, const ClassSpec& spec, double x, double y, double t) {
    return defect_sample(f, spec, x, y, t).defect;
}

namespace {

// Interior t grid used by both searches: stratified midpoints plus the
// quarter points.
std::vector<double> t_grid(std::size_t k) {
    std::vector<double> ts;
    for (std::size_t i = 0; i < k; ++i) ts.push_back((static_cast<double>(i) + 0.5) / static_cast<double>(k));
    for (double q : {0.25, 0.5, 0.75}) ts.push_back(q);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

std::vector<double> linspace(double lo, double hi, std::size_t k) {
    std::vector<double> v;
    if (k == 1) return {0.5 * (lo + hi)};
    for (std::size_t i = 0; i < k; ++i)
        v.push_back(i + 1 == k ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(k - 1));
    return v;
}

constexpr double kTMin = 1e-12;

}  // namespace

FalsifyReport falsify(const FuncDef& f, const ClassSpec& spec, std::size_t budget, std::uint64_t seed,
                      double tol) {
    if (budget < 1) throw InvalidArgument("falsify: budget must be at least 1");
    const double B = spec.bound;

    // Phase 1: coarse grid with about half the budget.
    std::size_t k = 1;
    while ((k + 1) * (k + 1) * t_grid(k + 1).size() <= budget / 2) ++k;
    std::vector<Triple> probes;
    if (k * k * t_grid(k).size() <= budget) {
        const auto xs = linspace(0.0, B, k);
        const auto ts = t_grid(k);
        for (double x : xs)
            for (double y : xs)
                for (double t : ts) probes.push_back({x, y, t});
    } else {
        probes.push_back({0.0, B, 0.5});
    }
    ProbeSummary best = scan_probes_parallel(f, spec, probes);
    std::size_t used = probes.size();

    // Phase 2: Gaussian refinement around the incumbent.
    constexpr int kRounds = 20;
    Rng rng(seed);
    Triple centre = best.empty() ? Triple{0.5 * B, 0.5 * B, 0.5} : best.argmin;
    double sigma = 0.25;
    for (int round = 0; round < kRounds && used < budget; ++round) {
        const std::size_t per_round = std::max<std::size_t>(1, (budget - used) / (kRounds - round));
        probes.clear();
        for (std::size_t i = 0; i < per_round; ++i) {
            Triple p;
            p.x = std::clamp(centre.x + sigma * B * rng.normal(), 0.0, B);
            p.y = std::clamp(centre.y + sigma * B * rng.normal(), 0.0, B);
            p.t = std::clamp(centre.t + sigma * rng.normal(), kTMin, 1.0 - kTMin);
            probes.push_back(p);
        }
        best.merge(scan_probes_parallel(f, spec, probes));
        used += probes.size();
        if (!best.empty()) centre = best.argmin;
        sigma *= 0.5;
    }

    FalsifyReport report;
    report.probes = best.evaluated + best.skipped;
    report.skipped = best.skipped;
    if (!best.empty()) {
        report.worst = best.argmin;
        report.worst_defect = best.min_defect;
        report.worst_lhs = best.lhs;
        report.worst_rhs = best.rhs;
        if (best.min_defect < -tol)
            report.counterexample = Counterexample{best.argmin.x, best.argmin.y, best.argmin.t,
                                                   best.min_defect, best.lhs, best.rhs};
    }
    return report;
}

std::vector<Triple> certify_probes(const ClassSpec& spec, std::size_t n, std::uint64_t seed) {
    const double B = spec.bound;
    std::vector<Triple> probes;
    probes.reserve(n + 256);

    // Kronecker sequence in 3D (generalized golden ratio), shifted by the seed.
    constexpr double g = 1.2207440846057594753616853491088319;  // root of x^4 = x + 1
    const std::array<double, 3> alpha{1.0 / g, 1.0 / (g * g), 1.0 / (g * g * g)};
    Rng rng(seed);
    std::array<double, 3> shift{rng.uniform(), rng.uniform(), rng.uniform()};
    for (std::size_t i = 1; i <= n; ++i) {
        std::array<double, 3> u{};
        for (int d = 0; d < 3; ++d) {
            const double v = shift[d] + alpha[d] * static_cast<double>(i);
            u[d] = v - std::floor(v);
        }
        probes.push_back({B * u[0], B * u[1], kTMin + (1.0 - 2.0 * kTMin) * u[2]});
    }

    // Boundary-biased grid, including the corners where m < 1 bites.
    constexpr std::array<double, 7> edges{0.0, 0.01, 0.25, 0.5, 0.75, 0.99, 1.0};
    constexpr std::array<double, 5> ts{1e-3, 0.25, 0.5, 0.75, 1.0 - 1e-3};
    for (double ex : edges)
        for (double ey : edges)
            for (double t : ts) probes.push_back({B * ex, B * ey, t});
    return probes;
}

CertifyReport certify_sampled(const FuncDef& f, const ClassSpec& spec, std::size_t n,
                              std::uint64_t seed, double tol) {
    if (n < 1) throw InvalidArgument("certify_sampled: n must be at least 1");
    const auto probes = certify_probes(spec, n, seed);
    const ProbeSummary s = scan_probes_parallel(f, spec, probes);

    CertifyReport r;
    r.samples_ok = s.evaluated;
    r.skipped = s.skipped;
    r.note = "sampled evidence, not a proof";
    if (s.empty()) {
        r.certified = false;
        r.min_defect = std::numeric_limits<double>::quiet_NaN();
        r.min_value = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    r.min_defect = s.min_defect;
    r.argmin = s.argmin;
    r.lhs = s.lhs;
    r.rhs = s.rhs;
    r.min_value = s.min_value;
    r.nonnegative = !requires_nonnegative(spec.tag) || s.min_value >= 0.0;
    r.certified = s.min_defect >= -tol && r.nonnegative;
    return r;
}

}  // namespace genconvex
