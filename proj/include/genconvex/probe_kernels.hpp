#pragma once

#include <cstddef>
#include <limits>
#include <span>

#include "genconvex/classes.hpp"

namespace genconvex {

/// Reduction of a batch of defect probes. The minimum is taken under the
/// total order (defect, x, y, t), so the result does not depend on how the
/// batch was split across threads.
struct ProbeSummary {
    double min_defect = std::numeric_limits<double>::infinity();
    Triple argmin;
    double lhs = 0.0;
    double rhs = 0.0;
    double min_value = std::numeric_limits<double>::infinity();
    std::size_t evaluated = 0;
    std::size_t skipped = 0;

    bool empty() const noexcept { return evaluated == 0; }
    void merge(const ProbeSummary& other) noexcept;
    friend bool operator==(const ProbeSummary&, const ProbeSummary&) = default;
};

/// Reference implementation, one probe after another.
ProbeSummary scan_probes_serial(const FuncDef& f, const ClassSpec& spec,
                                std::span<const Triple> probes);

/// OpenMP version. Must agree bit-for-bit with scan_probes_serial.
ProbeSummary scan_probes_parallel(const FuncDef& f, const ClassSpec& spec,
                                  std::span<const Triple> probes);

}  // namespace genconvex
