#include "genconvex/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "genconvex/errors.hpp"

namespace genconvex {

namespace {

// Kronrod abscissae on [-1, 1] (non-negative half). Odd indices are the
// 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Panel {
    double a;
    double b;
    double value;
    double err;
};

struct ByError {
    bool operator()(const Panel& x, const Panel& y) const {
        if (x.err != y.err) return x.err < y.err;
        return x.a > y.a;
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

class Evaluator {
public:
    explicit Evaluator(const Integrand& f) : f_(f) {}

    double operator()(double u) {
        ++count;
        double v = 0.0;
        try {
            v = f_(u);
        } catch (const DomainError& e) {
            throw IntegrandError(std::string("integrand undefined at ") + fmt(u) + ": " + e.what(), u);
        }
        if (!std::isfinite(v)) throw IntegrandError("integrand not finite at " + fmt(u), u);
        return v;
    }

    std::size_t count = 0;

private:
    const Integrand& f_;
};

// One Gauss-Kronrod 7/15 panel, error estimate as in QUADPACK's qk15.
Panel gk15(Evaluator& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    double resabs = std::fabs(resk);
    std::array<double, 7> f1{};
    std::array<double, 7> f2{};
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        f1[j] = f(center - dx);
        f2[j] = f(center + dx);
        const double sum = f1[j] + f2[j];
        resk += kWgk[j] * sum;
        resabs += kWgk[j] * (std::fabs(f1[j]) + std::fabs(f2[j]));
        if (j % 2 == 1) resg += kWg[j / 2] * sum;
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::fabs(fc - mean);
    for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::fabs(f1[j] - mean) + std::fabs(f2[j] - mean));

    const double width = std::fabs(half);
    resk *= half;
    resabs *= width;
    resasc *= width;
    double err = std::fabs((resk - resg * half));
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
        err = std::max(50.0 * eps * resabs, err);
    return {a, b, resk, err};
}

}  // namespace

Integral integrate(const Integrand& f, double a, double b, double tol, std::size_t budget) {
    if (!(a < b))
        throw OrientationError("integrate: need a < b, got [" + fmt(a) + ", " + fmt(b) + "]");
    if (!std::isfinite(a) || !std::isfinite(b))
        throw OrientationError("integrate: interval must be finite");
    if (!(tol > 0.0)) throw InvalidArgument("integrate: tol must be positive");

    Evaluator eval(f);
    std::priority_queue<Panel, std::vector<Panel>, ByError> heap;
    heap.push(gk15(eval, a, b));
    double total_err = heap.top().err;
    const double min_width = std::ldexp(b - a, -200);

    Integral out;
    while (total_err > tol) {
        if (eval.count + 30 > budget) {
            out.converged = false;
            out.diagnosis = "evaluation budget of " + std::to_string(budget) + " exhausted";
            break;
        }
        Panel worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (worst.b - worst.a < min_width || mid <= worst.a || mid >= worst.b) {
            out.converged = false;
            out.diagnosis = "refinement stalled near [" + fmt(worst.a) + ", " + fmt(worst.b) +
                            "] (possible non-integrable singularity)";
            break;
        }
        heap.pop();
        const Panel left = gk15(eval, worst.a, mid);
        const Panel right = gk15(eval, mid, worst.b);
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
    }

    std::vector<Panel> panels;
    panels.reserve(heap.size());
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    double value = 0.0;
    double err = 0.0;
    for (const Panel& p : panels) {
        value += p.value;
        err += p.err;
    }
    out.value = value;
    out.abs_err = err;
    out.evaluations = eval.count;
    return out;
}

Integral integrate(const FuncDef& f, double a, double b, double tol, std::size_t budget) {
    return integrate([&f](double u) { return f.evaluate(u); }, a, b, tol, budget);
}

HMoments h_moments(const FuncDef& h, double tol) {
    HMoments out;
    out.m1 = integrate([&h](double t) { return h.evaluate(t); }, 0.0, 1.0, tol);
    out.m2 = integrate(
        [&h](double t) {
            const double v = h.evaluate(t);
            return v * v;
        },
        0.0, 1.0, tol);
    out.mx = integrate([&h](double t) { return h.evaluate(t) * h.evaluate(1.0 - t); }, 0.0, 1.0, tol);
    return out;
}

}  // namespace genconvex
