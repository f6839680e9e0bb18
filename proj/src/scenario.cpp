#include "genconvex/scenario.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "genconvex/algebra.hpp"
#include "genconvex/errors.hpp"
#include "genconvex/quad.hpp"

namespace genconvex::scenario {

// Defined in report.cpp.
ItemResult describe_verdict(const Verdict& v);
ItemResult describe_certify(const CertifyReport& r, const ClassSpec& spec,
                            const std::optional<std::pair<DominanceResult, CertifyReport>>& dominated);
ItemResult describe_falsify(const FalsifyReport& r, const ClassSpec& spec);
ItemResult describe_reduction(const ReductionReport& r);
ItemResult describe_moments(const HMoments& hm, const FuncDef& h, double report_tol);
ItemResult describe_error(const std::string& message);

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 5> kCommands{{
    {Command::Certify, "certify"},
    {Command::Falsify, "falsify"},
    {Command::Verify, "verify"},
    {Command::Reduce, "reduce"},
    {Command::Sweep, "sweep"},
}};

[[noreturn]] void schema(const std::string& what, const std::string& path) { throw SchemaError(what, path); }

std::string join(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::optional<double> opt_number(const Json& doc, std::string_view key, const std::string& path) {
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) return std::nullopt;
    if (!it->is_number()) schema("field " + join(path, key) + " must be a number", join(path, key));
    const double v = it->get<double>();
    if (!std::isfinite(v)) schema("field " + join(path, key) + " must be finite", join(path, key));
    return v;
}

double req_number(const Json& doc, std::string_view key, const std::string& path) {
    if (auto v = opt_number(doc, key, path)) return *v;
    schema("missing field: " + join(path, key), join(path, key));
}

std::optional<std::string> opt_string(const Json& doc, std::string_view key, const std::string& path) {
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) schema("field " + join(path, key) + " must be a string", join(path, key));
    return it->get<std::string>();
}

std::string req_string(const Json& doc, std::string_view key, const std::string& path) {
    if (auto v = opt_string(doc, key, path)) return *v;
    schema("missing field: " + join(path, key), join(path, key));
}

std::optional<std::uint64_t> opt_count(const Json& doc, std::string_view key, const std::string& path) {
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) return std::nullopt;
    if (!it->is_number_integer() || it->get<std::int64_t>() < 0)
        schema("field " + join(path, key) + " must be a non-negative integer", join(path, key));
    return it->get<std::uint64_t>();
}

Interval parse_interval(const Json& node, const std::string& path) {
    if (!node.is_array() || node.size() != 2 || !node[0].is_number() || !node[1].is_number())
        schema("field " + path + " must be [lo, hi]", path);
    const Interval d{node[0].get<double>(), node[1].get<double>()};
    if (!std::isfinite(d.lo) || !std::isfinite(d.hi) || !(d.lo < d.hi))
        schema("field " + path + " must satisfy lo < hi", path);
    return d;
}

Command parse_command(const std::string& name, const std::string& path) {
    for (const auto& [c, n] : kCommands)
        if (n == name) return c;
    schema("unknown command '" + name + "' in " + path, path);
}

template <class Fn>
auto schema_wrap(const std::string& path, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const SchemaError&) {
        throw;
    } catch (const Error& e) {
        schema("field " + path + ": " + e.what(), path);
    }
}

/// Fully typed view of one non-sweep command.
struct Job {
    Command command = Command::Verify;
    std::optional<FuncDef> f, g, h, phi, dominating_h;
    Interval domain{0.0, 1.0};
    std::optional<ClassTag> cls;
    std::optional<double> m;
    std::optional<TheoremId> theorem;
    double x = 0.0;
    double y = 1.0;
    Tolerances tol;
    double class_tol = kDefaultClassTol;
    std::uint64_t seed = 0;
    std::size_t budget = kDefaultFalsifyBudget;
    std::size_t n = kDefaultCertifySamples;
    std::optional<ReductionPair> pair;
    std::vector<TheoremInputs> probes;
    bool h_moments_only = false;
};

std::optional<FuncDef> opt_function(const Json& doc, std::string_view key, Interval def,
                                    const std::string& path) {
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) return std::nullopt;
    return resolve_function(*it, def, join(path, key));
}

FuncDef req_function(const Json& doc, std::string_view key, Interval def, const std::string& path) {
    if (auto f = opt_function(doc, key, def, path)) return *f;
    schema("missing field: " + join(path, key), join(path, key));
}

// x/y with a/b accepted as aliases.
// x/y (or a/b); an absent point falls back to the matching end of the domain.
double point(const Json& doc, std::string_view key, std::string_view alias, double fallback, const std::string& path) {
    if (auto v = opt_number(doc, key, path)) return *v;
    if (auto v = opt_number(doc, alias, path)) return *v;
    return fallback;
}

constexpr Interval kUnit{0.0, 1.0};

TheoremInputs theorem_inputs(const Job& j) {
    return TheoremInputs{
        *j.f, j.g, j.h ? *j.h : catalog("identity", {}, kUnit), j.m.value_or(1.0),
        j.phi ? *j.phi : identity_phi(), j.x, j.y,
    };
}

bool needs_g(TheoremId id) { return id == TheoremId::T2_3 || id == TheoremId::T1_14; }

Job parse_job(const Json& doc, Command command, const std::string& path);

void parse_common(Job& j, const Json& doc, const std::string& path) {
    if (auto it = doc.find("domain"); it != doc.end()) j.domain = parse_interval(*it, join(path, "domain"));
    j.m = opt_number(doc, "m", path);
    if (j.m && !(*j.m > 0.0 && *j.m <= 1.0)) schema("field " + join(path, "m") + " must lie in (0, 1]", join(path, "m"));
    j.tol.quad = opt_number(doc, "tol_quad", path).value_or(kDefaultQuadTol);
    j.tol.report = opt_number(doc, "tol_report", path).value_or(kDefaultReportTol);
    j.class_tol = opt_number(doc, "tol", path).value_or(kDefaultClassTol);
    if (!(j.tol.quad > 0.0)) schema("field " + join(path, "tol_quad") + " must be positive", join(path, "tol_quad"));
    if (!(j.tol.report >= 0.0)) schema("field " + join(path, "tol_report") + " must be non-negative", join(path, "tol_report"));
    if (!(j.class_tol >= 0.0)) schema("field " + join(path, "tol") + " must be non-negative", join(path, "tol"));
    j.seed = opt_count(doc, "seed", path).value_or(0);
    j.budget = opt_count(doc, "budget", path).value_or(kDefaultFalsifyBudget);
    j.n = opt_count(doc, "n", path).value_or(kDefaultCertifySamples);
    j.h = opt_function(doc, "h", kUnit, path);
    j.phi = opt_function(doc, "phi", j.domain, path);
}

Job parse_job(const Json& doc, Command command, const std::string& path) {
    if (!doc.is_object()) schema("scenario must be an object", path);
    Job j;
    j.command = command;
    parse_common(j, doc, path);
    switch (command) {
        case Command::Certify:
        case Command::Falsify: {
            j.f = req_function(doc, "f", j.domain, path);
            const std::string tag = req_string(doc, "class", path);
            j.cls = schema_wrap(join(path, "class"), [&] { return parse_class_tag(tag); });
            if (j.domain.lo != 0.0)
                schema("field " + join(path, "domain") + " must start at 0 for class checks", join(path, "domain"));
            if (command == Command::Falsify && j.budget < 1) schema("field " + join(path, "budget") + " must be >= 1", join(path, "budget"));
            if (command == Command::Certify && j.n < 1) schema("field " + join(path, "n") + " must be >= 1", join(path, "n"));
            j.dominating_h = opt_function(doc, "dominating_h", kUnit, path);
            break;
        }
        case Command::Verify: {
            const std::string id = req_string(doc, "theorem", path);
            if (id == "h_moments") {
                j.h_moments_only = true;
                j.h = req_function(doc, "h", kUnit, path);
                break;
            }
            j.theorem = schema_wrap(join(path, "theorem"), [&] { return parse_theorem_id(id); });
            j.f = req_function(doc, "f", j.domain, path);
            j.g = needs_g(*j.theorem) ? req_function(doc, "g", j.domain, path)
                                      : opt_function(doc, "g", j.domain, path);
            j.x = point(doc, "x", "a", j.domain.lo, path);
            j.y = point(doc, "y", "b", j.domain.hi, path);
            break;
        }
        case Command::Reduce: {
            const std::string name = req_string(doc, "pair", path);
            j.pair = schema_wrap(join(path, "pair"), [&] { return parse_reduction_pair(name); });
            auto it = doc.find("probes");
            if (it == doc.end()) schema("missing field: " + join(path, "probes"), join(path, "probes"));
            if (!it->is_array() || it->empty())
                schema("field " + join(path, "probes") + " must be a nonempty list", join(path, "probes"));
            Json base = doc;
            base.erase("probes");
            for (std::size_t i = 0; i < it->size(); ++i) {
                const std::string ppath = join(path, "probes[" + std::to_string(i) + "]");
                if (!(*it)[i].is_object()) schema("field " + ppath + " must be an object", ppath);
                Json merged = base;
                for (const auto& [k, v] : (*it)[i].items()) merged[k] = v;
                Job pj;
                parse_common(pj, merged, ppath);
                pj.f = req_function(merged, "f", pj.domain, ppath);
                pj.g = opt_function(merged, "g", pj.domain, ppath);
                if (*j.pair == ReductionPair::T2_3_T1_14 && !pj.g)
                    schema("missing field: " + join(ppath, "g"), join(ppath, "g"));
                pj.x = point(merged, "x", "a", pj.domain.lo, ppath);
                pj.y = point(merged, "y", "b", pj.domain.hi, ppath);
                j.probes.push_back(theorem_inputs(pj));
            }
            break;
        }
        case Command::Sweep:
            schema("nested sweep", path);
    }
    return j;
}

ItemResult execute(const Job& j) {
    try {
        switch (j.command) {
            case Command::Certify:
            case Command::Falsify: {
                const ClassSpec spec = ClassSpec::make(*j.cls, j.h, j.m, j.phi, j.domain.hi);
                if (j.command == Command::Falsify)
                    return describe_falsify(falsify(*j.f, spec, j.budget, j.seed, j.class_tol), spec);
                const CertifyReport base = certify_sampled(*j.f, spec, j.n, j.seed, j.class_tol);
                std::optional<std::pair<DominanceResult, CertifyReport>> dominated;
                if (j.dominating_h) {
                    const DominanceResult d = dominance_inclusion(*j.dominating_h, spec.h);
                    const ClassSpec wider = ClassSpec::make(*j.cls, *j.dominating_h, j.m, j.phi, j.domain.hi);
                    dominated.emplace(d, certify_sampled(*j.f, wider, j.n, j.seed, j.class_tol));
                }
                return describe_certify(base, spec, dominated);
            }
            case Command::Verify:
                if (j.h_moments_only) return describe_moments(h_moments(*j.h, j.tol.quad), *j.h, j.tol.report);
                return describe_verdict(verify(*j.theorem, theorem_inputs(j), j.tol));
            case Command::Reduce:
                return describe_reduction(check_reduction(*j.pair, j.probes, j.tol));
            case Command::Sweep:
                break;
        }
        return describe_error("sweep cannot be executed as a single item");
    } catch (const std::exception& e) {
        return describe_error(e.what());
    }
}

Json apply_cell(const Json& base, const std::vector<SweepAxis>& axes, const std::vector<double>& values) {
    Json cell = base;
    cell.erase("sweep");
    for (std::size_t i = 0; i < axes.size(); ++i) {
        const std::string& name = axes[i].name;
        if (name == "s") {
            cell["h"]["params"][0] = values[i];
        } else {
            // a/b are aliases of x/y; whichever spelling the document uses is replaced.
            std::string key = name == "a" ? "x" : name == "b" ? "y" : name;
            std::string alias = key == "x" ? "a" : key == "y" ? "b" : "";
            if (!alias.empty()) cell.erase(alias);
            cell[key] = values[i];
        }
    }
    return cell;
}

std::vector<std::vector<double>> grid_cells(const std::vector<SweepAxis>& axes) {
    std::vector<std::vector<double>> cells{{}};
    for (const SweepAxis& axis : axes) {
        std::vector<std::vector<double>> next;
        next.reserve(cells.size() * axis.values.size());
        for (const auto& prefix : cells)
            for (double v : axis.values) {
                auto c = prefix;
                c.push_back(v);
                next.push_back(std::move(c));
            }
        cells = std::move(next);
    }
    return cells;
}

std::vector<double> axis_values(const Json& node, const std::string& path) {
    std::vector<double> values;
    if (auto it = node.find("values"); it != node.end()) {
        if (!it->is_array()) schema("field " + join(path, "values") + " must be a list", join(path, "values"));
        for (std::size_t i = 0; i < it->size(); ++i) {
            const Json& v = (*it)[i];
            const std::string vp = join(path, "values[" + std::to_string(i) + "]");
            if (!v.is_number() || !std::isfinite(v.get<double>())) schema("field " + vp + " must be a finite number", vp);
            values.push_back(v.get<double>());
        }
    } else {
        const double from = req_number(node, "from", path);
        const double to = req_number(node, "to", path);
        const double step = req_number(node, "step", path);
        if (!(step > 0.0)) schema("field " + join(path, "step") + " must be positive", join(path, "step"));
        const double span = (to - from) / step;
        if (span > 1e7) schema("field " + path + " describes too many values", path);
        for (std::size_t i = 0; from + step * static_cast<double>(i) <= to + 1e-9 * step; ++i)
            values.push_back(from + step * static_cast<double>(i));
    }
    if (values.empty()) schema("field " + path + " is an empty range", path);
    return values;
}

}  // namespace

std::string_view to_string(Command c) noexcept {
    for (const auto& [k, n] : kCommands)
        if (k == c) return n;
    return "?";
}

std::string_view to_string(Outcome o) noexcept {
    switch (o) {
        case Outcome::Pass: return "pass";
        case Outcome::Fail: return "fail";
        case Outcome::Indeterminate: return "indeterminate";
        case Outcome::Error: return "error";
    }
    return "?";
}

FuncDef resolve_function(const Json& node, Interval def, const std::string& path) {
    if (node.is_string()) {
        const std::string text = node.get<std::string>();
        return schema_wrap(path, [&] { return from_expression(text, def); });
    }
    if (!node.is_object()) schema("field " + path + " must be a string or an object", path);
    Interval domain = def;
    if (auto it = node.find("domain"); it != node.end()) domain = parse_interval(*it, join(path, "domain"));

    if (auto it = node.find("expr"); it != node.end()) {
        if (!it->is_string()) schema("field " + join(path, "expr") + " must be a string", join(path, "expr"));
        const std::string var = opt_string(node, "var", path).value_or("");
        const std::string text = it->get<std::string>();
        return schema_wrap(path, [&] { return from_expression(text, domain, var); });
    }
    if (auto it = node.find("catalog"); it != node.end()) {
        if (!it->is_string()) schema("field " + join(path, "catalog") + " must be a string", join(path, "catalog"));
        std::vector<double> params;
        if (auto p = node.find("params"); p != node.end()) {
            if (!p->is_array()) schema("field " + join(path, "params") + " must be a list", join(path, "params"));
            for (std::size_t i = 0; i < p->size(); ++i) {
                const std::string pp = join(path, "params[" + std::to_string(i) + "]");
                if (!(*p)[i].is_number()) schema("field " + pp + " must be a number", pp);
                params.push_back((*p)[i].get<double>());
            }
        }
        const std::string name = it->get<std::string>();
        return schema_wrap(path, [&] { return catalog(name, params, domain); });
    }
    if (auto it = node.find("combine"); it != node.end()) {
        if (!it->is_array() || it->size() != 2) schema("field " + join(path, "combine") + " must be [f, g]", join(path, "combine"));
        const FuncDef f = resolve_function((*it)[0], domain, join(path, "combine[0]"));
        const FuncDef g = resolve_function((*it)[1], domain, join(path, "combine[1]"));
        double lambda = 1.0, mu = 1.0;
        if (auto w = node.find("weights"); w != node.end()) {
            if (!w->is_array() || w->size() != 2 || !(*w)[0].is_number() || !(*w)[1].is_number())
                schema("field " + join(path, "weights") + " must be [lambda, mu]", join(path, "weights"));
            lambda = (*w)[0].get<double>();
            mu = (*w)[1].get<double>();
        }
        return schema_wrap(path, [&] { return combine(f, g, lambda, mu); });
    }
    if (auto it = node.find("compose"); it != node.end()) {
        if (!it->is_array() || it->size() != 2) schema("field " + join(path, "compose") + " must be [f, phi]", join(path, "compose"));
        const FuncDef f = resolve_function((*it)[0], {}, join(path, "compose[0]"));
        const FuncDef phi = resolve_function((*it)[1], domain, join(path, "compose[1]"));
        return schema_wrap(path, [&] { return compose_phi(f, phi); });
    }
    if (auto it = node.find("segment"); it != node.end()) {
        const Json& s = *it;
        const std::string sp = join(path, "segment");
        if (!s.is_object()) schema("field " + sp + " must be an object", sp);
        const FuncDef f = req_function(s, "f", {}, sp);
        const FuncDef phi = opt_function(s, "phi", {}, sp).value_or(identity_phi());
        const double m = opt_number(s, "m", sp).value_or(1.0);
        const double x = req_number(s, "x", sp);
        const double y = req_number(s, "y", sp);
        return schema_wrap(path, [&] { return segment(f, phi, m, x, y).as_funcdef(); });
    }
    schema("field " + path + " needs one of expr, catalog, combine, compose, segment", path);
}

Scenario parse_scenario(Json doc, const Overrides& ov) {
    if (doc.is_null()) doc = Json::object();
    if (!doc.is_object()) schema("scenario must be an object", "");
    if (ov.command) doc["command"] = std::string(to_string(*ov.command));
    if (ov.seed) doc["seed"] = *ov.seed;
    if (ov.tol_quad) doc["tol_quad"] = *ov.tol_quad;
    if (ov.tol_report) doc["tol_report"] = *ov.tol_report;

    Scenario s;
    s.command = parse_command(req_string(doc, "command", ""), "command");
    s.name = opt_string(doc, "name", "").value_or("scenario");

    if (s.command != Command::Sweep) {
        parse_job(doc, s.command, "");
        s.source = std::move(doc);
        return s;
    }

    auto it = doc.find("sweep");
    if (it == doc.end() || !it->is_object()) schema("missing field: sweep", "sweep");
    const Json& sw = *it;
    const std::string target = req_string(sw, "target", "sweep");
    if (target == "h_moments") {
        s.sweep_target = Command::Verify;
        s.sweep_h_moments = true;
    } else {
        s.sweep_target = parse_command(target, "sweep.target");
        if (s.sweep_target == Command::Sweep || s.sweep_target == Command::Reduce)
            schema("sweep.target must be verify, certify, falsify or h_moments", "sweep.target");
    }
    s.cap = opt_count(sw, "cap", "sweep").value_or(kDefaultSweepCap);
    auto ax = sw.find("axes");
    if (ax == sw.end()) schema("missing field: sweep.axes", "sweep.axes");
    if (!ax->is_array() || ax->empty()) schema("field sweep.axes must be a nonempty list", "sweep.axes");
    std::size_t cells = 1;
    for (std::size_t i = 0; i < ax->size(); ++i) {
        const std::string ap = "sweep.axes[" + std::to_string(i) + "]";
        const Json& a = (*ax)[i];
        if (!a.is_object()) schema("field " + ap + " must be an object", ap);
        SweepAxis axis;
        axis.name = req_string(a, "name", ap);
        if (axis.name != "m" && axis.name != "s" && axis.name != "x" && axis.name != "y" && axis.name != "a" &&
            axis.name != "b")
            schema("field " + ap + ".name must be one of m, s, x, y, a, b", ap + ".name");
        if (axis.name == "s") {
            auto h = doc.find("h");
            if (h == doc.end() || !h->is_object() || !h->contains("catalog") || !h->contains("params") ||
                !(*h)["params"].is_array() || (*h)["params"].empty())
                schema("axis s needs h given as a catalog family with parameters", ap + ".name");
        }
        axis.values = axis_values(a, ap);
        cells *= axis.values.size();
        if (cells > s.cap)
            schema("sweep grid exceeds the cap of " + std::to_string(s.cap) + " cells", "sweep.cap");
        s.axes.push_back(std::move(axis));
    }

    // Validate every cell up front so a bad value fails before any work.
    Json probe = doc;
    if (s.sweep_h_moments) probe["theorem"] = "h_moments";
    for (const auto& cell : grid_cells(s.axes)) parse_job(apply_cell(probe, s.axes, cell), s.sweep_target, "");
    s.source = std::move(doc);
    return s;
}

Scenario load_scenario(const std::filesystem::path& path, const Overrides& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot read scenario file " + path.string(), "");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    Json doc;
    if (text.find_first_not_of(" \t\r\n") != std::string::npos) {
        try {
            doc = Json::parse(text);
        } catch (const Json::parse_error& e) {
            throw SchemaError(std::string("scenario is not valid JSON: ") + e.what(), "");
        }
    }
    return parse_scenario(std::move(doc), overrides);
}

Report run(const Scenario& s, int jobs) {
    const auto start = std::chrono::steady_clock::now();
#ifdef _OPENMP
    if (jobs > 0) omp_set_num_threads(jobs);
#else
    (void)jobs;
#endif
    Report r;
    r.scenario = s;

    if (s.command != Command::Sweep) {
        r.items.push_back(execute(parse_job(s.source, s.command, "")));
    } else {
        Json base = s.source;
        if (s.sweep_h_moments) base["theorem"] = "h_moments";
        const auto cells = grid_cells(s.axes);
        r.items.resize(cells.size());
        const auto n = static_cast<std::ptrdiff_t>(cells.size());
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            ItemResult item;
            try {
                item = execute(parse_job(apply_cell(base, s.axes, cells[idx]), s.sweep_target, ""));
            } catch (const std::exception& e) {
                item = describe_error(e.what());
            }
            item.cell = cells[idx];
            r.items[idx] = std::move(item);
        }
    }

    // Notes that qualify how the results should be read.
    const Json& doc = s.source;
    const Command effective = s.command == Command::Sweep ? s.sweep_target : s.command;
    if (effective == Command::Certify || effective == Command::Falsify) {
        if (auto c = doc.find("class"); c != doc.end() && c->is_string() && *c == "phi_convex")
            r.notes.emplace_back(
                "phi_convex read as t f(phi(x)) + (1 - t) f(phi(y)) on the right-hand side");
        if (effective == Command::Certify) r.notes.emplace_back("certification is sampled evidence, not a proof");
    }
    const std::string dump = doc.dump();
    if (dump.find("\"segment\"") != std::string::npos || dump.find("\"compose\"") != std::string::npos)
        r.notes.emplace_back("composed and segment functions are checked against (h, m)-convexity");

    bool fail = false, error = false, indeterminate = false;
    for (const auto& item : r.items) {
        fail = fail || item.outcome == Outcome::Fail;
        error = error || item.outcome == Outcome::Error;
        indeterminate = indeterminate || item.outcome == Outcome::Indeterminate;
    }
    r.exit_code = fail ? kExitFail : error ? kExitUsage : indeterminate ? kExitIndeterminate : kExitOk;
    r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

}  // namespace genconvex::scenario
