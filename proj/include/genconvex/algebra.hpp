#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "genconvex/classes.hpp"
#include "genconvex/func.hpp"

namespace genconvex {

/// Pointwise lambda f + mu g. Both weights must be >= 0 and the two domains
/// identical; otherwise InvalidArgument.
FuncDef combine(const FuncDef& f, const FuncDef& g, double lambda, double mu);

struct DominanceResult {
    bool dominates = false;
    double worst_gap = 0.0;  // min over the grid of h1(t) - h2(t)
    double worst_t = 0.5;
};

/// Checks h2(t) <= h1(t) on the interior grid t_i = i / (grid + 1),
/// i = 1..grid. When it holds, anything in the h2 class is in the h1 class.
DominanceResult dominance_inclusion(const FuncDef& h1, const FuncDef& h2, std::size_t grid = 999);

/// f o phi on phi's domain. Throws InvalidArgument when a sampled image of
/// phi leaves f's domain. Composing with the identity returns f unchanged.
FuncDef compose_phi(const FuncDef& f, const FuncDef& phi);

/// True when phi(u) = c u on its (finite) domain, checked on a grid with a
/// relative tolerance of 1e-12. A nonzero intercept is not linear.
bool is_linear(const FuncDef& phi, std::size_t grid = 256);

/// Sampled finite-difference monotonicity check, tolerance 0.
bool is_increasing(const FuncDef& f, Interval on, std::size_t grid = 1024);

/// Which hypothesis of the composition result applies to (f, phi).
enum class CompositionCase {
    LinearPhi,             // phi linear
    IncreasingFMConvexPhi, // f increasing and phi m-convex (sampled)
    None,
};

/// Decide the applicable case. The m-convexity of phi is certified on
/// phi's domain [0, B] with certify_sampled(n, seed).
CompositionCase composition_case(const FuncDef& f, const FuncDef& phi, double m,
                                 std::size_t n = kDefaultCertifySamples, std::uint64_t seed = 0);

/// g(t) = f(t phi(x) + m (1 - t) phi(y)) on t in [0, 1].
class SegmentFunction {
public:
    /// Throws DomainError if phi(x), phi(y) or the segment ends
    /// phi(x), m phi(y) fall outside f's domain.
    SegmentFunction(FuncDef f, FuncDef phi, double m, double x, double y);

    double operator()(double t) const;
    std::optional<double> try_evaluate(double t) const noexcept;

    /// The segment as a FuncDef on [0, 1], for use with the class checks.
    FuncDef as_funcdef() const;

    double m() const noexcept { return m_; }
    double phi_x() const noexcept { return px_; }
    double phi_y() const noexcept { return py_; }

private:
    FuncDef f_;
    FuncDef phi_;
    double m_;
    double x_;
    double y_;
    double px_;
    double py_;
};

SegmentFunction segment(const FuncDef& f, const FuncDef& phi, double m, double x, double y);

}  // namespace genconvex
