#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "genconvex/func.hpp"

namespace genconvex {

inline constexpr double kDefaultClassTol = 1e-9;
inline constexpr std::size_t kDefaultCertifySamples = 10'000;
inline constexpr std::size_t kDefaultFalsifyBudget = 20'000;

enum class ClassTag {
    Convex,
    MConvex,
    HConvex,
    HMConvex,
    PhiConvex,
    PhiHConvex,
    PhiHMConvex,
};

std::string_view to_string(ClassTag tag) noexcept;
/// Accepts the snake_case names (convex, m_convex, h_convex, hm_convex,
/// phi_convex, phi_h_convex, phi_hm_convex). Throws InvalidArgument.
ClassTag parse_class_tag(std::string_view name);

bool uses_h(ClassTag tag) noexcept;
bool uses_m(ClassTag tag) noexcept;
bool uses_phi(ClassTag tag) noexcept;
/// Classes whose definition also demands f >= 0.
bool requires_nonnegative(ClassTag tag) noexcept;

/// One member of the family of generalized convexity classes, all expressed
/// through the single inequality
///
///     f(t phi(x) + m (1-t) phi(y)) <= h(t) f(phi(x)) + m h(1-t) f(phi(y))
///
/// on [0, B]. Tags that do not use h, m or phi pin them to t, 1 and the
/// identity.
struct ClassSpec {
    ClassTag tag;
    FuncDef h;
    double m;
    FuncDef phi;
    double bound;  // B

    Interval domain() const noexcept { return {0.0, bound}; }

    /// Fills in the pinned parameters and checks consistency: an explicit
    /// h/m/phi that disagrees with the tag is InvalidArgument, as are
    /// m outside (0, 1], B <= 0, and an h that is negative or identically zero
    /// on the sample grid.
    static ClassSpec make(ClassTag tag, std::optional<FuncDef> h = std::nullopt,
                          std::optional<double> m = std::nullopt,
                          std::optional<FuncDef> phi = std::nullopt, double bound = 1.0);
};

/// Reading notes attached to reports that use `spec`.
std::vector<std::string> reading_notes(const ClassSpec& spec);

struct Triple {
    double x = 0.0;
    double y = 0.0;
    double t = 0.5;
    friend bool operator==(const Triple&, const Triple&) = default;
};

struct DefectSample {
    double lhs = 0.0;     // f(blend)
    double rhs = 0.0;     // h(t) f(phi(x)) + m h(1-t) f(phi(y))
    double defect = 0.0;  // rhs - lhs
    double min_value = 0.0;  // smallest of the three f values involved
};

/// Why a probe could not be evaluated.
enum class ProbeStatus {
    Ok,
    PointOutside,  // x or y outside [0, B], or t outside (0, 1)
    PhiUndefined,
    PhiOutOfRange,  // phi(x) or phi(y) outside [0, B]
    HUndefined,
    FUndefined,  // f undefined at phi(x), phi(y) or the blend point
};

std::string_view to_string(ProbeStatus status) noexcept;

ProbeStatus try_defect(const FuncDef& f, const ClassSpec& spec, const Triple& p,
                       DefectSample& out) noexcept;

/// h(t) f(phi(x)) + m h(1-t) f(phi(y)) - f(t phi(x) + m (1-t) phi(y)).
/// Throws DomainError when any piece is undefined.
DefectSample defect_sample(const FuncDef& f, const ClassSpec& spec, double x, double y, double t);
double defect(const FuncDef& f, const ClassSpec& spec, double x, double y, double t);

/// Witness that `f` violates the class inequality.
struct Counterexample {
    double x = 0.0;
    double y = 0.0;
    double t = 0.5;
    double defect = 0.0;  // rhs - lhs < -tol
    double lhs = 0.0;
    double rhs = 0.0;
};

struct FalsifyReport {
    std::optional<Counterexample> counterexample;
    Triple worst;                  // most negative probe seen, found or not
    double worst_defect = 0.0;
    double worst_lhs = 0.0;
    double worst_rhs = 0.0;
    std::size_t probes = 0;
    std::size_t skipped = 0;       // probes outside the definition's domain
};

/// Deterministic counterexample search: a coarse (x, y, t) grid with half the
/// budget, then 20 rounds of Gaussian perturbation around the incumbent with
/// the spread halved each round.
FalsifyReport falsify(const FuncDef& f, const ClassSpec& spec,
                      std::size_t budget = kDefaultFalsifyBudget, std::uint64_t seed = 0,
                      double tol = kDefaultClassTol);

struct CertifyReport {
    double min_defect = 0.0;
    Triple argmin;
    double lhs = 0.0;  // both sides at argmin
    double rhs = 0.0;
    std::size_t samples_ok = 0;
    std::size_t skipped = 0;
    double min_value = 0.0;    // smallest f value touched by any probe
    bool nonnegative = true;   // only enforced for classes that demand it
    bool certified = false;
    /// Always "sampled evidence, not a proof".
    std::string note;
};

/// Evaluate the defect on `n` quasi-random triples (seed-shifted Kronecker
/// sequence) plus a fixed boundary-biased grid. Certified iff every
/// evaluated probe has defect >= -tol and, where the class requires it,
/// f >= 0 at every touched point.
CertifyReport certify_sampled(const FuncDef& f, const ClassSpec& spec,
                              std::size_t n = kDefaultCertifySamples, std::uint64_t seed = 0,
                              double tol = kDefaultClassTol);

/// The probe set certify_sampled uses; exposed so callers can compare two
/// classes on identical probes.
std::vector<Triple> certify_probes(const ClassSpec& spec, std::size_t n, std::uint64_t seed);

}  // namespace genconvex
