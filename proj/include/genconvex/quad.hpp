#pragma once

#include <cstddef>
#include <functional>
#include <string>

#include "genconvex/func.hpp"

namespace genconvex {

inline constexpr double kDefaultQuadTol = 1e-10;
inline constexpr std::size_t kDefaultQuadBudget = 1'000'000;

/// Result of a numerical integration.
struct Integral {
    double value = 0.0;
    double abs_err = 0.0;        // estimated absolute error, >= 0
    std::size_t evaluations = 0;
    bool converged = true;       // false: budget hit or refinement stalled
    std::string diagnosis;       // set when !converged

    bool indeterminate() const noexcept { return !converged; }
};

using Integrand = std::function<double(double)>;

/// Adaptive 7/15-point Gauss-Kronrod quadrature of `f` over [a, b].
///
/// Only interior nodes are evaluated, so integrable endpoint singularities
/// are fine. The panel with the largest error estimate is bisected until the
/// summed estimate is <= tol. If the evaluation budget runs out, or a panel
/// shrinks below 2^-200 of the interval without its estimate settling, the
/// best value is returned with `converged == false`.
///
/// Throws OrientationError if !(a < b) and IntegrandError if `f` returns a
/// non-finite value or throws DomainError.
Integral integrate(const Integrand& f, double a, double b, double tol = kDefaultQuadTol,
                   std::size_t budget = kDefaultQuadBudget);

Integral integrate(const FuncDef& f, double a, double b, double tol = kDefaultQuadTol,
                   std::size_t budget = kDefaultQuadBudget);

/// The three integrals of h over (0, 1) that appear on the right-hand sides.
struct HMoments {
    Integral m1;  // int h(t) dt
    Integral m2;  // int h(t)^2 dt
    Integral mx;  // int h(t) h(1-t) dt

    bool indeterminate() const noexcept {
        return m1.indeterminate() || m2.indeterminate() || mx.indeterminate();
    }
};

HMoments h_moments(const FuncDef& h, double tol = kDefaultQuadTol);

}  // namespace genconvex
