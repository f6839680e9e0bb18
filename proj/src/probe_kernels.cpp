#include "genconvex/probe_kernels.hpp"

#include <tuple>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace genconvex {

namespace {

bool before(double da, const Triple& a, double db, const Triple& b) noexcept {
    return std::tie(da, a.x, a.y, a.t) < std::tie(db, b.x, b.y, b.t);
}

void accumulate(ProbeSummary& s, const FuncDef& f, const ClassSpec& spec, const Triple& p) noexcept {
    DefectSample d;
    if (try_defect(f, spec, p, d) != ProbeStatus::Ok) {
        ++s.skipped;
        return;
    }
    ++s.evaluated;
    if (d.min_value < s.min_value) s.min_value = d.min_value;
    if (s.evaluated == 1 || before(d.defect, p, s.min_defect, s.argmin)) {
        s.min_defect = d.defect;
        s.argmin = p;
        s.lhs = d.lhs;
        s.rhs = d.rhs;
    }
}

}  // namespace

void ProbeSummary::merge(const ProbeSummary& other) noexcept {
    if (other.evaluated > 0 &&
        (evaluated == 0 || before(other.min_defect, other.argmin, min_defect, argmin))) {
        min_defect = other.min_defect;
        argmin = other.argmin;
        lhs = other.lhs;
        rhs = other.rhs;
    }
    if (other.min_value < min_value) min_value = other.min_value;
    evaluated += other.evaluated;
    skipped += other.skipped;
}

ProbeSummary scan_probes_serial(const FuncDef& f, const ClassSpec& spec,
                                std::span<const Triple> probes) {
    ProbeSummary s;
    for (const Triple& p : probes) accumulate(s, f, spec, p);
    return s;
}

ProbeSummary scan_probes_parallel(const FuncDef& f, const ClassSpec& spec,
                                  std::span<const Triple> probes) {
    ProbeSummary total;
    const auto n = static_cast<std::ptrdiff_t>(probes.size());
#pragma omp parallel
    {
        ProbeSummary local;
#pragma omp for schedule(static) nowait
        for (std::ptrdiff_t i = 0; i < n; ++i) accumulate(local, f, spec, probes[static_cast<std::size_t>(i)]);
#pragma omp critical(genconvex_probe_merge)
        total.merge(local);
    }
    return total;
}

}  // namespace genconvex
