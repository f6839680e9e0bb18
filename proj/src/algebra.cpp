#include "genconvex/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "genconvex/errors.hpp"

namespace genconvex {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

class CombineImpl final : public FuncImpl {
public:
    CombineImpl(FuncDef f, FuncDef g, double lambda, double mu)
        : f_(std::move(f)), g_(std::move(g)), lambda_(lambda), mu_(mu) {}

    std::optional<double> eval(double u) const noexcept override {
        const auto a = f_.try_evaluate(u);
        const auto b = g_.try_evaluate(u);
        if (!a || !b) return std::nullopt;
        const double r = lambda_ * *a + mu_ * *b;
        if (!std::isfinite(r)) return std::nullopt;
        return r;
    }

    std::string describe() const override {
        return fmt(lambda_) + "*(" + f_.describe() + ") + " + fmt(mu_) + "*(" + g_.describe() + ")";
    }

private:
    FuncDef f_;
    FuncDef g_;
    double lambda_;
    double mu_;
};

class ComposeImpl final : public FuncImpl {
public:
    ComposeImpl(FuncDef f, FuncDef phi) : f_(std::move(f)), phi_(std::move(phi)) {}

    std::optional<double> eval(double u) const noexcept override {
        const auto v = phi_.try_evaluate(u);
        if (!v) return std::nullopt;
        return f_.try_evaluate(*v);
    }

    std::string describe() const override {
        return "(" + f_.describe() + ") o (" + phi_.describe() + ")";
    }

private:
    FuncDef f_;
    FuncDef phi_;
};

class SegmentImpl final : public FuncImpl {
public:
    explicit SegmentImpl(SegmentFunction g, std::string text) : g_(std::move(g)), text_(std::move(text)) {}
    std::optional<double> eval(double t) const noexcept override { return g_.try_evaluate(t); }
    std::string describe() const override { return text_; }

private:
    SegmentFunction g_;
    std::string text_;
};

std::vector<double> sample_points(const Interval& d, std::size_t grid) {
    if (!std::isfinite(d.lo) || !std::isfinite(d.hi))
        throw InvalidArgument("sampled check needs a finite domain");
    std::vector<double> pts;
    for (std::size_t i = 0; i <= grid; ++i)
        pts.push_back(i == grid ? d.hi : d.lo + (d.hi - d.lo) * static_cast<double>(i) / static_cast<double>(grid));
    return pts;
}

}  // namespace

FuncDef combine(const FuncDef& f, const FuncDef& g, double lambda, double mu) {
    if (!(lambda >= 0.0) || !(mu >= 0.0) || !std::isfinite(lambda) || !std::isfinite(mu))
        throw InvalidArgument("combine: weights must be finite and non-negative");
    if (!(f.domain() == g.domain()))
        throw InvalidArgument("combine: mismatched domains");
    return FuncDef(std::make_shared<CombineImpl>(f, g, lambda, mu), f.domain());
}

DominanceResult dominance_inclusion(const FuncDef& h1, const FuncDef& h2, std::size_t grid) {
    if (grid < 3) throw InvalidArgument("dominance_inclusion: grid must be at least 3");
    DominanceResult r;
    r.worst_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i <= grid; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(grid + 1);
        const double gap = h1.evaluate(t) - h2.evaluate(t);
        if (gap < r.worst_gap) {
            r.worst_gap = gap;
            r.worst_t = t;
        }
    }
    r.dominates = r.worst_gap >= 0.0;
    return r;
}

FuncDef compose_phi(const FuncDef& f, const FuncDef& phi) {
    if (phi.impl().is_identity() && phi.domain().contains(f.domain())) return f;
    const Interval d = phi.domain();
    if (std::isfinite(d.lo) && std::isfinite(d.hi)) {
        for (double u : sample_points(d, 256)) {
            const auto v = phi.try_evaluate(u);
            if (!v) throw InvalidArgument("compose_phi: phi undefined at " + fmt(u));
            if (!f.domain().contains(*v))
                throw InvalidArgument("compose_phi: phi(" + fmt(u) + ") = " + fmt(*v) +
                                      " lies outside the domain of f");
        }
    }
    return FuncDef(std::make_shared<ComposeImpl>(f, phi), d);
}

bool is_linear(const FuncDef& phi, std::size_t grid) {
    const auto pts = sample_points(phi.domain(), grid);
    const auto at0 = phi.domain().contains(0.0) ? phi.try_evaluate(0.0) : std::optional<double>(0.0);
    if (!at0 || *at0 != 0.0) return false;
    // Slope from the point farthest from the origin.
    const double far = std::fabs(pts.front()) > std::fabs(pts.back()) ? pts.front() : pts.back();
    if (far == 0.0) return true;
    const auto vf = phi.try_evaluate(far);
    if (!vf) return false;
    const double c = *vf / far;
    for (double u : pts) {
        const auto v = phi.try_evaluate(u);
        if (!v) return false;
        if (std::fabs(*v - c * u) > 1e-12 * std::max(1.0, std::fabs(c * u))) return false;
    }
    return true;
}

bool is_increasing(const FuncDef& f, Interval on, std::size_t grid) {
    const auto pts = sample_points(on, grid);
    std::optional<double> prev;
    for (double u : pts) {
        const auto v = f.try_evaluate(u);
        if (!v) return false;
        if (prev && *v < *prev) return false;
        prev = v;
    }
    return true;
}

CompositionCase composition_case(const FuncDef& f, const FuncDef& phi, double m, std::size_t n,
                                 std::uint64_t seed) {
    if (is_linear(phi)) return CompositionCase::LinearPhi;
    const Interval d = phi.domain();
    if (!(d.lo == 0.0 && std::isfinite(d.hi) && d.hi > 0.0)) return CompositionCase::None;
    // f only needs to increase over the image of phi.
    Interval image{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (double u : sample_points(d, 256)) {
        const auto v = phi.try_evaluate(u);
        if (!v) return CompositionCase::None;
        image.lo = std::min(image.lo, *v);
        image.hi = std::max(image.hi, *v);
    }
    if (!is_increasing(f, image)) return CompositionCase::None;
    const ClassSpec spec = ClassSpec::make(ClassTag::MConvex, std::nullopt, m, std::nullopt, d.hi);
    if (certify_sampled(phi, spec, n, seed).certified) return CompositionCase::IncreasingFMConvexPhi;
    return CompositionCase::None;
}

SegmentFunction::SegmentFunction(FuncDef f, FuncDef phi, double m, double x, double y)
    : f_(std::move(f)), phi_(std::move(phi)), m_(m), x_(x), y_(y), px_(0.0), py_(0.0) {
    if (!(m > 0.0 && m <= 1.0)) throw InvalidArgument("segment: m must lie in (0, 1]");
    px_ = phi_.evaluate(x);
    py_ = phi_.evaluate(y);
    // The blend is affine in t, so its two ends bound every interior point.
    for (double end : {px_, m_ * py_})
        if (!f_.domain().contains(end))
            throw DomainError("segment: blend end " + fmt(end) + " outside the domain of f");
    f_.evaluate(px_);
    f_.evaluate(py_);
}

std::optional<double> SegmentFunction::try_evaluate(double t) const noexcept {
    if (!(t >= 0.0 && t <= 1.0)) return std::nullopt;
    return f_.try_evaluate(t * px_ + m_ * (1.0 - t) * py_);
}

double SegmentFunction::operator()(double t) const {
    if (auto v = try_evaluate(t)) return *v;
    throw DomainError("segment: undefined at t = " + fmt(t));
}

FuncDef SegmentFunction::as_funcdef() const {
    const std::string text = "(" + f_.describe() + ")(t*" + fmt(px_) + " + " + fmt(m_) + "*(1-t)*" +
                             fmt(py_) + ")";
    return FuncDef(std::make_shared<SegmentImpl>(*this, text), {0.0, 1.0});
}

SegmentFunction segment(const FuncDef& f, const FuncDef& phi, double m, double x, double y) {
    return SegmentFunction(f, phi, m, x, y);
}

}  // namespace genconvex
