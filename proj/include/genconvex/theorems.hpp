#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "genconvex/func.hpp"
#include "genconvex/quad.hpp"

namespace genconvex {

inline constexpr double kDefaultReportTol = 1e-9;

enum class TheoremId {
    HC,       // classic Hermite-Hadamard
    T1_9,     // h-convex Hermite-Hadamard (both bounds)
    T1_11,    // (h, m)-convex two-average bound
    T1_13,    // phi_h-convex product-with-reflection bound
    T1_14,    // phi_h-convex f*g bound
    T2_1,     // phi_{h,m}: product-with-reflection bound
    T2_2dot,  // phi_{h,m}: single-average bound
    T2_2,     // phi_{h,m}: two-average bound
    T2_3,     // phi_{h,m}: f*g bound
};

std::string_view to_string(TheoremId id) noexcept;
TheoremId parse_theorem_id(std::string_view name);

enum class Status { Pass, Fail, Indeterminate };
std::string_view to_string(Status s) noexcept;

struct Tolerances {
    double quad = kDefaultQuadTol;
    double report = kDefaultReportTol;
};

/// Lower half of a two-sided inequality: bound <= lhs.
struct LowerBound {
    double bound = 0.0;
    double margin = 0.0;  // lhs - bound
};

/// Both sides of one inequality instance, checked numerically.
///
/// pass          margin >= -(quad_err + report_tol)   (and the lower margin, if any)
/// fail          otherwise
/// indeterminate some integral did not converge, or the integrand was undefined
struct Verdict {
    TheoremId theorem = TheoremId::HC;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;    // rhs - lhs
    double quad_err = 0.0;  // propagated error of lhs and rhs
    Status status = Status::Indeterminate;
    std::optional<LowerBound> lower;
    std::string diagnosis;
    std::vector<std::pair<std::string, std::string>> functions;  // name -> description
    std::vector<std::pair<std::string, double>> inputs;          // numeric echo
    std::vector<std::string> notes;

    std::optional<double> input(std::string_view name) const;
};

/// Everything a verifier may need. Background theorems read x, y as a, b.
struct TheoremInputs {
    FuncDef f;
    std::optional<FuncDef> g;
    FuncDef h;
    double m = 1.0;
    FuncDef phi;
    double x = 0.0;
    double y = 1.0;
};

/// Identity map on the whole line.
FuncDef identity_phi();

// phi_{h,m} inequalities. All throw OrientationError when the integration
// interval is empty or reversed; undefined integrands become an
// indeterminate Verdict with a diagnosis.

/// mean of f(u) f(phi(x) + m phi(y) - u) on [phi(x), m phi(y)]
///   <= [f(phi(x))^2 + m^2 f(phi(y))^2] int h(t)h(1-t) + (m+1) f(phi(x)) f(phi(y)) int h^2
Verdict verify_t2_1(const FuncDef& f, const FuncDef& h, double m, const FuncDef& phi, double x,
                    double y, const Tolerances& tol = {});

/// mean of f on [phi(x), m phi(y)] <= [f(phi(x)) + f(phi(y))] int h
Verdict verify_t2_2dot(const FuncDef& f, const FuncDef& h, double m, const FuncDef& phi, double x,
                       double y, const Tolerances& tol = {});

/// (1/(m+1)) [mean of f on [m phi(x), phi(y)] + mean of f on [phi(x), m phi(y)]]
///   <= [f(phi(x)) + f(phi(y))] int h,   for 0 <= m phi(x) <= phi(x) < m phi(y) <= phi(y)
Verdict verify_t2_2(const FuncDef& f, const FuncDef& h, double m, const FuncDef& phi, double x,
                    double y, const Tolerances& tol = {});

/// mean of f g on [phi(x), m phi(y)] <= M int h^2 + m N int h(t)h(1-t)
Verdict verify_t2_3(const FuncDef& f, const FuncDef& g, const FuncDef& h, double m,
                    const FuncDef& phi, double x, double y, const Tolerances& tol = {});

// Background inequalities.
Verdict verify_hc(const FuncDef& f, double a, double b, const Tolerances& tol = {});
/// Throws InvalidArgument if h(1/2) <= 0.
Verdict verify_t1_9(const FuncDef& f, const FuncDef& h, double a, double b, const Tolerances& tol = {});
Verdict verify_t1_11(const FuncDef& f, const FuncDef& h, double m, double a, double b,
                     const Tolerances& tol = {});
/// The free (x, y) on the right-hand side are bound to (a, b).
Verdict verify_t1_13(const FuncDef& f, const FuncDef& h, const FuncDef& phi, double a, double b,
                     const Tolerances& tol = {});
Verdict verify_t1_14(const FuncDef& f, const FuncDef& g, const FuncDef& h, const FuncDef& phi,
                     double a, double b, const Tolerances& tol = {});

/// Dispatch on id. T2_3 and T1_14 need `in.g`.
Verdict verify(TheoremId id, const TheoremInputs& in, const Tolerances& tol = {});

enum class ReductionPair {
    T2_1_T1_13,     // m = 1
    T2_2dot_T1_9,   // m = 1, phi = id, against the upper bound of T1_9
    T2_2_T1_11,     // phi = id
    T2_3_T1_14,     // m = 1
};

std::string_view to_string(ReductionPair p) noexcept;
ReductionPair parse_reduction_pair(std::string_view name);

struct ReductionReport {
    ReductionPair pair = ReductionPair::T2_1_T1_13;
    std::size_t probes = 0;
    double max_lhs_deviation = 0.0;
    double max_rhs_deviation = 0.0;
    /// Smallest (allowance - deviation) over probes; negative means failure.
    double worst_slack = 0.0;
    bool pass = false;
    std::vector<std::pair<Verdict, Verdict>> verdicts;  // (general, reduced) per probe
};

/// Run the general verifier with the reduced parameters forced, and the
/// reduced verifier on the same data, for every probe. Passes iff on each
/// probe both |dLHS| and |dRHS| are <= 1e-12 + the two verdicts' quad_err.
ReductionReport check_reduction(ReductionPair pair, std::span<const TheoremInputs> probes,
                                const Tolerances& tol = {});

}  // namespace genconvex
