#include <cmath>
#include <cstdio>
#include <sstream>

#include "genconvex/algebra.hpp"
#include "genconvex/scenario.hpp"

namespace genconvex::scenario {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

Json triple_json(const Triple& p) { return Json{{"x", p.x}, {"y", p.y}, {"t", p.t}}; }

std::string triple_text(const Triple& p) {
    return "(x, y, t) = (" + format_double(p.x) + ", " + format_double(p.y) + ", " + format_double(p.t) + ")";
}

Outcome outcome_of(Status s) {
    switch (s) {
        case Status::Pass: return Outcome::Pass;
        case Status::Fail: return Outcome::Fail;
        case Status::Indeterminate: return Outcome::Indeterminate;
    }
    return Outcome::Error;
}

Json integral_json(const Integral& I) {
    Json j{{"value", I.value}, {"abs_err", I.abs_err}, {"evaluations", I.evaluations}, {"converged", I.converged}};
    if (!I.converged) j["diagnosis"] = I.diagnosis;
    return j;
}

Json verdict_json(const Verdict& v) {
    Json j{{"kind", "verdict"},
           {"theorem", std::string(to_string(v.theorem))},
           {"lhs", v.lhs},
           {"rhs", v.rhs},
           {"margin", v.margin},
           {"quad_err", v.quad_err},
           {"status", std::string(to_string(v.status))}};
    if (v.lower) j["lower"] = Json{{"bound", v.lower->bound}, {"margin", v.lower->margin}};
    if (!v.diagnosis.empty()) j["diagnosis"] = v.diagnosis;
    Json fns = Json::object();
    for (const auto& [k, d] : v.functions) fns[k] = d;
    j["functions"] = std::move(fns);
    Json in = Json::object();
    for (const auto& [k, x] : v.inputs) in[k] = x;
    j["inputs"] = std::move(in);
    if (!v.notes.empty()) j["notes"] = v.notes;
    return j;
}

}  // namespace

ItemResult describe_verdict(const Verdict& v) {
    ItemResult r;
    r.data = verdict_json(v);
    r.outcome = outcome_of(v.status);
    r.row = {std::string(to_string(v.theorem)), v.lhs, v.rhs, v.margin, v.quad_err, std::string(to_string(v.status))};
    std::ostringstream os;
    os << "[" << to_string(v.theorem) << "] lhs = " << format_double(v.lhs) << "  rhs = " << format_double(v.rhs)
       << "  margin = " << format_double(v.margin) << "  quad_err = " << format_double(v.quad_err) << "  -> "
       << to_string(v.status) << "\n";
    if (v.lower)
        os << "    lower bound = " << format_double(v.lower->bound) << "  lower margin = " << format_double(v.lower->margin)
           << "\n";
    for (const auto& [k, d] : v.functions) os << "    " << k << " = " << d << "\n";
    for (const auto& [k, x] : v.inputs) os << "    " << k << " = " << format_double(x) << "\n";
    if (!v.diagnosis.empty()) os << "    diagnosis: " << v.diagnosis << "\n";
    for (const auto& n : v.notes) os << "    note: " << n << "\n";
    r.text = os.str();
    return r;
}

ItemResult describe_certify(const CertifyReport& c, const ClassSpec& spec,
                            const std::optional<std::pair<DominanceResult, CertifyReport>>& dominated) {
    ItemResult r;
    const std::string cls(to_string(spec.tag));
    r.data = Json{{"kind", "certification"},
                  {"class", cls},
                  {"h", spec.h.describe()},
                  {"m", spec.m},
                  {"phi", spec.phi.describe()},
                  {"bound", spec.bound},
                  {"min_defect", c.min_defect},
                  {"argmin", triple_json(c.argmin)},
                  {"lhs", c.lhs},
                  {"rhs", c.rhs},
                  {"samples_ok", c.samples_ok},
                  {"skipped", c.skipped},
                  {"min_value", c.min_value},
                  {"nonnegative", c.nonnegative},
                  {"certified", c.certified},
                  {"note", c.note}};
    r.outcome = c.certified ? Outcome::Pass : Outcome::Fail;
    std::ostringstream os;
    os << "[certify " << cls << "] min_defect = " << format_double(c.min_defect) << " at " << triple_text(c.argmin)
       << "\n    samples = " << c.samples_ok << "  skipped = " << c.skipped
       << "  min f = " << format_double(c.min_value) << (c.nonnegative ? "" : " (negative values violate the class)")
       << "\n    -> " << (c.certified ? "certified-sampled" : "not certified") << " (" << c.note << ")\n";
    if (dominated) {
        const auto& [d, wide] = *dominated;
        // If h1 dominates h and f is certified under h, it must be certified under h1.
        const bool consistent = !(d.dominates && c.certified && !wide.certified);
        r.data["dominance"] = Json{{"dominates", d.dominates},
                                   {"worst_gap", d.worst_gap},
                                   {"worst_t", d.worst_t},
                                   {"min_defect", wide.min_defect},
                                   {"certified", wide.certified},
                                   {"consistent", consistent}};
        os << "    dominating h: dominates = " << (d.dominates ? "yes" : "no")
           << "  worst gap = " << format_double(d.worst_gap) << "  min_defect = " << format_double(wide.min_defect)
           << "  -> " << (wide.certified ? "certified-sampled" : "not certified") << "\n";
        if (!consistent) {
            r.outcome = Outcome::Fail;
            os << "    inconsistency: certified under h but not under a dominating h\n";
        }
    }
    r.data["status"] = std::string(to_string(r.outcome));
    r.row = {"certify:" + cls, c.lhs, c.rhs, c.min_defect, 0.0, std::string(to_string(r.outcome))};
    r.text = os.str();
    return r;
}

ItemResult describe_falsify(const FalsifyReport& f, const ClassSpec& spec) {
    ItemResult r;
    const std::string cls(to_string(spec.tag));
    r.outcome = f.counterexample ? Outcome::Fail : Outcome::Pass;
    r.data = Json{{"kind", "falsify"},
                  {"class", cls},
                  {"h", spec.h.describe()},
                  {"m", spec.m},
                  {"phi", spec.phi.describe()},
                  {"bound", spec.bound}};
    if (f.counterexample) {
        const auto& c = *f.counterexample;
        r.data["counterexample"] = Json{{"x", c.x}, {"y", c.y}, {"t", c.t}, {"defect", c.defect}, {"lhs", c.lhs}, {"rhs", c.rhs}};
    } else {
        r.data["counterexample"] = nullptr;
    }
    r.data["worst"] = triple_json(f.worst);
    r.data["worst_defect"] = f.worst_defect;
    r.data["probes"] = f.probes;
    r.data["skipped"] = f.skipped;
    r.data["status"] = f.counterexample ? "counterexample" : "none-found";
    r.row = {"falsify:" + cls, f.worst_lhs, f.worst_rhs, f.worst_defect, 0.0,
             f.counterexample ? "counterexample" : "none-found"};
    std::ostringstream os;
    if (f.counterexample) {
        const auto& c = *f.counterexample;
        os << "[falsify " << cls << "] counterexample at " << triple_text({c.x, c.y, c.t})
           << "\n    lhs = " << format_double(c.lhs) << "  rhs = " << format_double(c.rhs)
           << "  defect = " << format_double(c.defect) << "\n";
    } else {
        os << "[falsify " << cls << "] no counterexample; worst defect " << format_double(f.worst_defect) << " at "
           << triple_text(f.worst) << "\n";
    }
    os << "    probes = " << f.probes << "  skipped = " << f.skipped << "\n";
    r.text = os.str();
    return r;
}

ItemResult describe_reduction(const ReductionReport& rep) {
    ItemResult r;
    r.outcome = rep.pass ? Outcome::Pass : Outcome::Fail;
    Json per = Json::array();
    for (const auto& [general, reduced] : rep.verdicts)
        per.push_back(Json{{"general", verdict_json(general)}, {"reduced", verdict_json(reduced)}});
    r.data = Json{{"kind", "reduction"},
                  {"pair", std::string(to_string(rep.pair))},
                  {"probes", rep.probes},
                  {"max_lhs_deviation", rep.max_lhs_deviation},
                  {"max_rhs_deviation", rep.max_rhs_deviation},
                  {"worst_slack", rep.worst_slack},
                  {"pass", rep.pass},
                  {"status", rep.pass ? "pass" : "fail"},
                  {"verdicts", std::move(per)}};
    r.row = {"reduce:" + std::string(to_string(rep.pair)), rep.max_lhs_deviation, rep.max_rhs_deviation,
             rep.worst_slack, 0.0, rep.pass ? "pass" : "fail"};
    std::ostringstream os;
    os << "[reduce " << to_string(rep.pair) << "] probes = " << rep.probes
       << "  max |dLHS| = " << format_double(rep.max_lhs_deviation)
       << "  max |dRHS| = " << format_double(rep.max_rhs_deviation) << "  -> " << (rep.pass ? "pass" : "fail") << "\n";
    r.text = os.str();
    return r;
}

ItemResult describe_moments(const HMoments& hm, const FuncDef& h, double report_tol) {
    ItemResult r;
    const double err = hm.m1.abs_err + hm.m2.abs_err + 2.0 * std::fabs(hm.m1.value) * hm.m1.abs_err;
    // m2 >= m1^2 (Cauchy-Schwarz) is the sanity check reported as the margin.
    const double slack = hm.m2.value - hm.m1.value * hm.m1.value;
    r.outcome = hm.indeterminate() ? Outcome::Indeterminate
                : slack >= -(err + report_tol) ? Outcome::Pass
                                                : Outcome::Fail;
    r.data = Json{{"kind", "h_moments"},
                  {"h", h.describe()},
                  {"m1", integral_json(hm.m1)},
                  {"m2", integral_json(hm.m2)},
                  {"mx", integral_json(hm.mx)},
                  {"status", std::string(to_string(r.outcome))}};
    r.row = {"h_moments", hm.m1.value, hm.m2.value, slack, err, std::string(to_string(r.outcome))};
    std::ostringstream os;
    os << "[h_moments " << h.describe() << "] int h = " << format_double(hm.m1.value)
       << "  int h^2 = " << format_double(hm.m2.value) << "  int h(t)h(1-t) = " << format_double(hm.mx.value)
       << "  -> " << to_string(r.outcome) << "\n";
    for (const auto* I : {&hm.m1, &hm.m2, &hm.mx})
        if (!I->converged) os << "    diagnosis: " << I->diagnosis << "\n";
    r.text = os.str();
    return r;
}

ItemResult describe_error(const std::string& message) {
    ItemResult r;
    r.outcome = Outcome::Error;
    r.data = Json{{"kind", "error"}, {"error", message}, {"status", "error"}};
    r.row = {"error", NAN, NAN, NAN, NAN, "error"};
    r.text = "[error] " + message + "\n";
    return r;
}

std::string to_machine(const Report& rep) {
    Json results = Json::array();
    const bool sweep = rep.scenario.command == Command::Sweep;
    for (std::size_t i = 0; i < rep.items.size(); ++i) {
        const ItemResult& item = rep.items[i];
        if (!sweep) {
            results.push_back(item.data);
            continue;
        }
        Json axes = Json::object();
        for (std::size_t k = 0; k < rep.scenario.axes.size(); ++k) axes[rep.scenario.axes[k].name] = item.cell[k];
        results.push_back(Json{{"cell_index", i}, {"axes", std::move(axes)}, {"result", item.data}});
    }
    Json out{{"tool", std::string(kToolName)},
             {"version", std::string(kVersion)},
             {"scenario", rep.scenario.source},
             {"notes", rep.notes},
             {"results", std::move(results)},
             {"exit_status", rep.exit_code}};
    return out.dump(2) + "\n";
}

std::string to_text(const Report& rep) {
    std::ostringstream os;
    os << kToolName << " " << kVersion << "  scenario '" << rep.scenario.name << "'  command "
       << to_string(rep.scenario.command) << "\n";
    for (const auto& n : rep.notes) os << "note: " << n << "\n";
    for (std::size_t i = 0; i < rep.items.size(); ++i) {
        const ItemResult& item = rep.items[i];
        if (!item.cell.empty()) {
            os << "cell " << i << ":";
            for (std::size_t k = 0; k < rep.scenario.axes.size(); ++k)
                os << " " << rep.scenario.axes[k].name << " = " << format_double(item.cell[k]);
            os << "\n";
        }
        os << item.text;
    }
    char wall[32];
    std::snprintf(wall, sizeof wall, "%.3f", rep.wall_ms);
    os << "wall time: " << wall << " ms\n";
    os << "exit status: " << rep.exit_code << "\n";
    return os.str();
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

std::string to_csv(const Report& rep) {
    std::string out = "scenario,cell_index";
    for (const auto& a : rep.scenario.axes) out += "," + csv_field(a.name);
    out += ",theorem_id,lhs,rhs,margin,quad_err,status\n";
    for (std::size_t i = 0; i < rep.items.size(); ++i) {
        const ItemResult& item = rep.items[i];
        out += csv_field(rep.scenario.name) + "," + std::to_string(i);
        for (double v : item.cell) out += "," + format_double(v);
        out += "," + csv_field(item.row.theorem_id) + "," + format_double(item.row.lhs) + "," +
               format_double(item.row.rhs) + "," + format_double(item.row.margin) + "," +
               format_double(item.row.quad_err) + "," + csv_field(item.row.status) + "\n";
    }
    return out;
}

}  // namespace genconvex::scenario
