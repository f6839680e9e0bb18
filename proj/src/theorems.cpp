#include "genconvex/theorems.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "genconvex/errors.hpp"

namespace genconvex {

namespace {

constexpr std::array<std::pair<TheoremId, std::string_view>, 9> kTheorems{{
    {TheoremId::HC, "HC"},
    {TheoremId::T1_9, "T1_9"},
    {TheoremId::T1_11, "T1_11"},
    {TheoremId::T1_13, "T1_13"},
    {TheoremId::T1_14, "T1_14"},
    {TheoremId::T2_1, "T2_1"},
    {TheoremId::T2_2dot, "T2_2dot"},
    {TheoremId::T2_2, "T2_2"},
    {TheoremId::T2_3, "T2_3"},
}};

constexpr std::array<std::pair<ReductionPair, std::string_view>, 4> kPairs{{
    {ReductionPair::T2_1_T1_13, "T2_1->T1_13"},
    {ReductionPair::T2_2dot_T1_9, "T2_2dot->T1_9"},
    {ReductionPair::T2_2_T1_11, "T2_2->T1_11"},
    {ReductionPair::T2_3_T1_14, "T2_3->T1_14"},
}};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

/// Integral mean over [lo, hi] with the error of the mean.
struct Mean {
    double value;
    double err;
    bool converged;
    std::string diagnosis;
};

Mean mean_over(const Integrand& fn, double lo, double hi, double tol) {
    const Integral I = integrate(fn, lo, hi, tol);
    const double len = hi - lo;
    return {I.value / len, I.abs_err / len, I.converged, I.diagnosis};
}

/// Accumulates the pieces of one verdict: values, propagated error and
/// convergence.
class Builder {
public:
    Builder(TheoremId id, const Tolerances& tol) : tol_(tol) { v_.theorem = id; }

    Builder& fn(std::string name, const FuncDef& f) {
        v_.functions.emplace_back(std::move(name), f.describe());
        return *this;
    }
    Builder& in(std::string name, double value) {
        v_.inputs.emplace_back(std::move(name), value);
        return *this;
    }
    Builder& note(std::string text) {
        v_.notes.push_back(std::move(text));
        return *this;
    }

    void add_error(double e) { v_.quad_err += e; }

    void require(const Integral& I, std::string_view what) {
        if (!I.converged) fail_convergence(std::string(what) + ": " + I.diagnosis);
    }
    void require(const Mean& M, std::string_view what) {
        if (!M.converged) fail_convergence(std::string(what) + ": " + M.diagnosis);
    }

    Verdict finish(double lhs, double rhs, std::optional<double> lower_bound = std::nullopt) {
        v_.lhs = lhs;
        v_.rhs = rhs;
        v_.margin = rhs - lhs;
        const double allowance = v_.quad_err + tol_.report;
        bool ok = v_.margin >= -allowance;
        if (lower_bound) {
            v_.lower = LowerBound{*lower_bound, lhs - *lower_bound};
            ok = ok && v_.lower->margin >= -allowance;
        }
        if (!converged_) {
            v_.status = Status::Indeterminate;
        } else {
            v_.status = ok ? Status::Pass : Status::Fail;
        }
        return std::move(v_);
    }

    Verdict undefined(const std::string& why) {
        v_.lhs = v_.rhs = v_.margin = std::numeric_limits<double>::quiet_NaN();
        v_.status = Status::Indeterminate;
        v_.diagnosis = why;
        return std::move(v_);
    }

private:
    void fail_convergence(const std::string& why) {
        converged_ = false;
        if (!v_.diagnosis.empty()) v_.diagnosis += "; ";
        v_.diagnosis += why;
    }

    Verdict v_;
    Tolerances tol_;
    bool converged_ = true;
};

// Runs `body`; domain and integrand failures become an indeterminate
// verdict, orientation and argument errors propagate.
template <class Body>
Verdict guarded(Builder& b, Body&& body) {
    try {
        return body();
    } catch (const IntegrandError& e) {
        return b.undefined(e.what());
    } catch (const DomainError& e) {
        return b.undefined(e.what());
    }
}

void check_m(double m) {
    if (!(m > 0.0 && m <= 1.0)) throw InvalidArgument("m must lie in (0, 1], got " + fmt(m));
}

void require_less(double lo, double hi, std::string_view lo_name, std::string_view hi_name) {
    if (!(lo < hi))
        throw OrientationError("need " + std::string(lo_name) + " < " + std::string(hi_name) + ", got " +
                               fmt(lo) + " >= " + fmt(hi));
}

}  // namespace

std::string_view to_string(TheoremId id) noexcept {
    for (const auto& [k, name] : kTheorems)
        if (k == id) return name;
    return "?";
}

TheoremId parse_theorem_id(std::string_view name) {
    for (const auto& [k, n] : kTheorems)
        if (n == name) return k;
    throw InvalidArgument("unknown theorem id '" + std::string(name) + "'");
}

std::string_view to_string(Status s) noexcept {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Indeterminate: return "indeterminate";
    }
    return "?";
}

std::string_view to_string(ReductionPair p) noexcept {
    for (const auto& [k, name] : kPairs)
        if (k == p) return name;
    return "?";
}

ReductionPair parse_reduction_pair(std::string_view name) {
    for (const auto& [k, n] : kPairs)
        if (n == name) return k;
    throw InvalidArgument("unknown reduction pair '" + std::string(name) + "'");
}

std::optional<double> Verdict::input(std::string_view name) const {
    for (const auto& [k, v] : inputs)
        if (k == name) return v;
    return std::nullopt;
}

FuncDef identity_phi() { return catalog("identity"); }

Verdict verify_t2_1(const FuncDef& f, const FuncDef& h, double m, const FuncDef& phi, double x,
                    double y, const Tolerances& tol) {
    check_m(m);
    Builder b(TheoremId::T2_1, tol);
    b.fn("f", f).fn("h", h).fn("phi", phi).in("m", m).in("x", x).in("y", y);
    b.note("right-hand side bracketed as [f(phi(x))^2 + m^2 f(phi(y))^2] int h(t)h(1-t) + "
           "(m+1) f(phi(x)) f(phi(y)) int h^2");
    return guarded(b, [&] {
        const double px = phi.evaluate(x);
        const double py = phi.evaluate(y);
        const double hi = m * py;
        b.in("phi(x)", px).in("phi(y)", py);
        require_less(px, hi, "phi(x)", "m phi(y)");
        const double s = px + hi;
        const Mean lhs = mean_over([&](double u) { return f.evaluate(u) * f.evaluate(s - u); }, px, hi, tol.quad);
        b.require(lhs, "lhs integral");
        const HMoments hm = h_moments(h, tol.quad);
        b.require(hm.m2, "int h^2");
        b.require(hm.mx, "int h(t)h(1-t)");
        const double fx = f.evaluate(px);
        const double fy = f.evaluate(py);
        const double ca = fx * fx + m * m * fy * fy;
        const double cb = fx * fy * (m + 1.0);
        b.in("int_h2", hm.m2.value).in("int_hh", hm.mx.value);
        b.add_error(lhs.err + std::fabs(ca) * hm.mx.abs_err + std::fabs(cb) * hm.m2.abs_err);
        return b.finish(lhs.value, ca * hm.mx.value + cb * hm.m2.value);
    });
}

Verdict verify_t2_2dot(const FuncDef& f, const FuncDef& h, double m, const FuncDef& phi, double x,
                       double y, const Tolerances& tol) {
    check_m(m);
    Builder b(TheoremId::T2_2dot, tol);
    b.fn("f", f).fn("h", h).fn("phi", phi).in("m", m).in("x", x).in("y", y);
    return guarded(b, [&] {
        const double px = phi.evaluate(x);
        const double py = phi.evaluate(y);
        const double hi = m * py;
        b.in("phi(x)", px).in("phi(y)", py);
        require_less(px, hi, "phi(x)", "m phi(y)");
        const Mean lhs = mean_over([&](double u) { return f.evaluate(u); }, px, hi, tol.quad);
        b.require(lhs, "lhs integral");
        const Integral m1 = integrate(h, 0.0, 1.0, tol.quad);
        b.require(m1, "int h");
        const double c = f.evaluate(px) + f.evaluate(py);
        b.in("int_h", m1.value);
        b.add_error(lhs.err + std::fabs(c) * m1.abs_err);
        return b.finish(lhs.value, c * m1.value);
    });
}

Verdict verify_t2_2(const FuncDef& f, const FuncDef& h, double m, const FuncDef& phi, double x,
                    double y, const Tolerances& tol) {
    check_m(m);
    Builder b(TheoremId::T2_2, tol);
    b.fn("f", f).fn("h", h).fn("phi", phi).in("m", m).in("x", x).in("y", y);
    return guarded(b, [&] {
        const double px = phi.evaluate(x);
        const double py = phi.evaluate(y);
        b.in("phi(x)", px).in("phi(y)", py);
        if (!(0.0 <= m * px && m * px <= px && m * py <= py))
            throw OrientationError("need 0 <= m phi(x) <= phi(x) < m phi(y) <= phi(y), got phi(x) = " +
                                   fmt(px) + ", phi(y) = " + fmt(py) + ", m = " + fmt(m));
        require_less(px, m * py, "phi(x)", "m phi(y)");
        const Mean outer = mean_over([&](double u) { return f.evaluate(u); }, m * px, py, tol.quad);
        const Mean inner = mean_over([&](double u) { return f.evaluate(u); }, px, m * py, tol.quad);
        b.require(outer, "integral over [m phi(x), phi(y)]");
        b.require(inner, "integral over [phi(x), m phi(y)]");
        const Integral m1 = integrate(h, 0.0, 1.0, tol.quad);
        b.require(m1, "int h");
        const double c = f.evaluate(px) + f.evaluate(py);
        b.in("int_h", m1.value);
        b.add_error((outer.err + inner.err) / (m + 1.0) + std::fabs(c) * m1.abs_err);
        return b.finish((outer.value + inner.value) / (m + 1.0), c * m1.value);
    });
}

Verdict verify_t2_3(const FuncDef& f, const FuncDef& g, const FuncDef& h, double m,
                    const FuncDef& phi, double x, double y, const Tolerances& tol) {
    check_m(m);
    Builder b(TheoremId::T2_3, tol);
    b.fn("f", f).fn("g", g).fn("h", h).fn("phi", phi).in("m", m).in("x", x).in("y", y);
    return guarded(b, [&] {
        const double px = phi.evaluate(x);
        const double py = phi.evaluate(y);
        const double hi = m * py;
        b.in("phi(x)", px).in("phi(y)", py);
        require_less(px, hi, "phi(x)", "m phi(y)");
        const Mean lhs = mean_over([&](double u) { return f.evaluate(u) * g.evaluate(u); }, px, hi, tol.quad);
        b.require(lhs, "lhs integral");
        const HMoments hm = h_moments(h, tol.quad);
        b.require(hm.m2, "int h^2");
        b.require(hm.mx, "int h(t)h(1-t)");
        const double fx = f.evaluate(px), fy = f.evaluate(py);
        const double gx = g.evaluate(px), gy = g.evaluate(py);
        const double M = fx * gx + m * m * fy * gy;
        const double N = fx * gy + fy * gx;
        b.in("M", M).in("N", N).in("int_h2", hm.m2.value).in("int_hh", hm.mx.value);
        b.add_error(lhs.err + std::fabs(M) * hm.m2.abs_err + std::fabs(m * N) * hm.mx.abs_err);
        return b.finish(lhs.value, M * hm.m2.value + m * N * hm.mx.value);
    });
}

Verdict verify_hc(const FuncDef& f, double a, double b_, const Tolerances& tol) {
    Builder b(TheoremId::HC, tol);
    b.fn("f", f).in("a", a).in("b", b_);
    require_less(a, b_, "a", "b");
    return guarded(b, [&] {
        const Mean mean = mean_over([&](double u) { return f.evaluate(u); }, a, b_, tol.quad);
        b.require(mean, "integral");
        b.add_error(mean.err);
        const double mid = f.evaluate(0.5 * (a + b_));
        return b.finish(mean.value, 0.5 * (f.evaluate(a) + f.evaluate(b_)), mid);
    });
}

Verdict verify_t1_9(const FuncDef& f, const FuncDef& h, double a, double b_, const Tolerances& tol) {
    Builder b(TheoremId::T1_9, tol);
    b.fn("f", f).fn("h", h).in("a", a).in("b", b_);
    require_less(a, b_, "a", "b");
    const double h_half = h.evaluate(0.5);
    if (!(h_half > 0.0))
        throw InvalidArgument("T1_9 divides by h(1/2), which is " + fmt(h_half));
    return guarded(b, [&] {
        const Mean mean = mean_over([&](double u) { return f.evaluate(u); }, a, b_, tol.quad);
        b.require(mean, "integral");
        const Integral m1 = integrate(h, 0.0, 1.0, tol.quad);
        b.require(m1, "int h");
        const double c = f.evaluate(a) + f.evaluate(b_);
        b.in("h(1/2)", h_half).in("int_h", m1.value);
        b.add_error(mean.err + std::fabs(c) * m1.abs_err);
        const double lower = f.evaluate(0.5 * (a + b_)) / (2.0 * h_half);
        return b.finish(mean.value, c * m1.value, lower);
    });
}

Verdict verify_t1_11(const FuncDef& f, const FuncDef& h, double m, double a, double b_,
                     const Tolerances& tol) {
    check_m(m);
    Builder b(TheoremId::T1_11, tol);
    b.fn("f", f).fn("h", h).in("m", m).in("a", a).in("b", b_);
    if (!(0.0 <= a)) throw OrientationError("T1_11 needs 0 <= a, got a = " + fmt(a));
    require_less(a, b_, "a", "b");
    if (m * b_ == a) throw OrientationError("T1_11: m b = a makes the first average degenerate");
    return guarded(b, [&] {
        // The first average runs over [a, m b] in whichever order the ends fall.
        const double lo1 = std::min(a, m * b_), hi1 = std::max(a, m * b_);
        const Mean first = mean_over([&](double u) { return f.evaluate(u); }, lo1, hi1, tol.quad);
        const Mean second = mean_over([&](double u) { return f.evaluate(u); }, m * a, b_, tol.quad);
        b.require(first, "integral over [a, m b]");
        b.require(second, "integral over [m a, b]");
        const Integral m1 = integrate(h, 0.0, 1.0, tol.quad);
        b.require(m1, "int h");
        const double c = f.evaluate(a) + f.evaluate(b_);
        b.in("int_h", m1.value);
        b.add_error((first.err + second.err) / (m + 1.0) + std::fabs(c) * m1.abs_err);
        return b.finish((first.value + second.value) / (m + 1.0), c * m1.value);
    });
}

Verdict verify_t1_13(const FuncDef& f, const FuncDef& h, const FuncDef& phi, double a, double b_,
                     const Tolerances& tol) {
    Builder b(TheoremId::T1_13, tol);
    b.fn("f", f).fn("h", h).fn("phi", phi).in("a", a).in("b", b_);
    b.note("free (x, y) on the right-hand side bound to (a, b)");
    return guarded(b, [&] {
        const double pa = phi.evaluate(a);
        const double pb = phi.evaluate(b_);
        b.in("phi(a)", pa).in("phi(b)", pb);
        require_less(pa, pb, "phi(a)", "phi(b)");
        const double s = pa + pb;
        const Mean lhs = mean_over([&](double u) { return f.evaluate(u) * f.evaluate(s - u); }, pa, pb, tol.quad);
        b.require(lhs, "lhs integral");
        const HMoments hm = h_moments(h, tol.quad);
        b.require(hm.m2, "int h^2");
        b.require(hm.mx, "int h(t)h(1-t)");
        const double fa = f.evaluate(pa);
        const double fb = f.evaluate(pb);
        const double ca = fa * fa + fb * fb;
        const double cb = 2.0 * fa * fb;
        b.in("int_h2", hm.m2.value).in("int_hh", hm.mx.value);
        b.add_error(lhs.err + std::fabs(ca) * hm.mx.abs_err + std::fabs(cb) * hm.m2.abs_err);
        return b.finish(lhs.value, ca * hm.mx.value + cb * hm.m2.value);
    });
}

Verdict verify_t1_14(const FuncDef& f, const FuncDef& g, const FuncDef& h, const FuncDef& phi,
                     double a, double b_, const Tolerances& tol) {
    Builder b(TheoremId::T1_14, tol);
    b.fn("f", f).fn("g", g).fn("h", h).fn("phi", phi).in("a", a).in("b", b_);
    b.note("free (x, y) on the right-hand side bound to (a, b)");
    return guarded(b, [&] {
        const double pa = phi.evaluate(a);
        const double pb = phi.evaluate(b_);
        b.in("phi(a)", pa).in("phi(b)", pb);
        require_less(pa, pb, "phi(a)", "phi(b)");
        const Mean lhs = mean_over([&](double u) { return f.evaluate(u) * g.evaluate(u); }, pa, pb, tol.quad);
        b.require(lhs, "lhs integral");
        const HMoments hm = h_moments(h, tol.quad);
        b.require(hm.m2, "int h^2");
        b.require(hm.mx, "int h(t)h(1-t)");
        const double fa = f.evaluate(pa), fb = f.evaluate(pb);
        const double ga = g.evaluate(pa), gb = g.evaluate(pb);
        const double M = fa * ga + fb * gb;
        const double N = fa * gb + fb * ga;
        b.in("M", M).in("N", N).in("int_h2", hm.m2.value).in("int_hh", hm.mx.value);
        b.add_error(lhs.err + std::fabs(M) * hm.m2.abs_err + std::fabs(N) * hm.mx.abs_err);
        return b.finish(lhs.value, M * hm.m2.value + N * hm.mx.value);
    });
}

Verdict verify(TheoremId id, const TheoremInputs& in, const Tolerances& tol) {
    auto need_g = [&]() -> const FuncDef& {
        if (!in.g) throw InvalidArgument(std::string(to_string(id)) + " needs a second function g");
        return *in.g;
    };
    switch (id) {
        case TheoremId::HC: return verify_hc(in.f, in.x, in.y, tol);
        case TheoremId::T1_9: return verify_t1_9(in.f, in.h, in.x, in.y, tol);
        case TheoremId::T1_11: return verify_t1_11(in.f, in.h, in.m, in.x, in.y, tol);
        case TheoremId::T1_13: return verify_t1_13(in.f, in.h, in.phi, in.x, in.y, tol);
        case TheoremId::T1_14: return verify_t1_14(in.f, need_g(), in.h, in.phi, in.x, in.y, tol);
        case TheoremId::T2_1: return verify_t2_1(in.f, in.h, in.m, in.phi, in.x, in.y, tol);
        case TheoremId::T2_2dot: return verify_t2_2dot(in.f, in.h, in.m, in.phi, in.x, in.y, tol);
        case TheoremId::T2_2: return verify_t2_2(in.f, in.h, in.m, in.phi, in.x, in.y, tol);
        case TheoremId::T2_3: return verify_t2_3(in.f, need_g(), in.h, in.m, in.phi, in.x, in.y, tol);
    }
    throw InvalidArgument("unknown theorem");
}

ReductionReport check_reduction(ReductionPair pair, std::span<const TheoremInputs> probes,
                                const Tolerances& tol) {
    if (probes.empty()) throw InvalidArgument("check_reduction: probe set is empty");
    constexpr double kFloor = 1e-12;
    ReductionReport r;
    r.pair = pair;
    r.probes = probes.size();
    r.pass = true;
    r.worst_slack = std::numeric_limits<double>::infinity();
    const FuncDef id = identity_phi();
    for (const TheoremInputs& p : probes) {
        auto need_g = [&]() -> const FuncDef& {
            if (!p.g) throw InvalidArgument(std::string(to_string(pair)) + " needs a second function g");
            return *p.g;
        };
        Verdict general;
        Verdict reduced;
        double reduced_lhs = 0.0;
        double reduced_rhs = 0.0;
        switch (pair) {
            case ReductionPair::T2_1_T1_13:
                general = verify_t2_1(p.f, p.h, 1.0, p.phi, p.x, p.y, tol);
                reduced = verify_t1_13(p.f, p.h, p.phi, p.x, p.y, tol);
                break;
            case ReductionPair::T2_2dot_T1_9:
                general = verify_t2_2dot(p.f, p.h, 1.0, id, p.x, p.y, tol);
                reduced = verify_t1_9(p.f, p.h, p.x, p.y, tol);
                break;
            case ReductionPair::T2_2_T1_11:
                general = verify_t2_2(p.f, p.h, p.m, id, p.x, p.y, tol);
                reduced = verify_t1_11(p.f, p.h, p.m, p.x, p.y, tol);
                break;
            case ReductionPair::T2_3_T1_14:
                general = verify_t2_3(p.f, need_g(), p.h, 1.0, p.phi, p.x, p.y, tol);
                reduced = verify_t1_14(p.f, need_g(), p.h, p.phi, p.x, p.y, tol);
                break;
        }
        reduced_lhs = reduced.lhs;
        reduced_rhs = reduced.rhs;
        const double dl = std::fabs(general.lhs - reduced_lhs);
        const double dr = std::fabs(general.rhs - reduced_rhs);
        const double allowance = kFloor + general.quad_err + reduced.quad_err;
        // NaN deviations (undefined verdicts) count as failures.
        const double slack = std::min(allowance - dl, allowance - dr);
        if (!(slack >= 0.0)) r.pass = false;
        r.max_lhs_deviation = std::max(r.max_lhs_deviation, std::isnan(dl) ? INFINITY : dl);
        r.max_rhs_deviation = std::max(r.max_rhs_deviation, std::isnan(dr) ? INFINITY : dr);
        r.worst_slack = std::min(r.worst_slack, std::isnan(slack) ? -INFINITY : slack);
        r.verdicts.emplace_back(std::move(general), std::move(reduced));
    }
    return r;
}

}  // namespace genconvex
