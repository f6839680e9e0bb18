#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "genconvex/classes.hpp"
#include "genconvex/func.hpp"
#include "genconvex/theorems.hpp"

namespace genconvex::scenario {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kToolName = "genconvex";
inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr std::size_t kDefaultSweepCap = 100'000;

enum class Command { Certify, Falsify, Verify, Reduce, Sweep };
std::string_view to_string(Command c) noexcept;

/// Process exit codes.
enum ExitCode : int {
    kExitOk = 0,
    kExitFail = 1,           // inequality failed, counterexample found, not certified
    kExitUsage = 2,          // usage or schema error, or a per-item runtime error
    kExitIndeterminate = 3,  // numerically indeterminate
};

enum class Outcome { Pass, Fail, Indeterminate, Error };
std::string_view to_string(Outcome o) noexcept;

/// Command-line values that replace scenario fields.
struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> tol_quad;
    std::optional<double> tol_report;
    std::optional<Command> command;
};

struct SweepAxis {
    std::string name;  // m, s, x, y, a or b
    std::vector<double> values;
};

/// A validated scenario: the source document (after overrides) plus the
/// parts needed to drive it.
struct Scenario {
    Json source;
    std::string name;
    Command command = Command::Verify;
    // sweep only
    Command sweep_target = Command::Verify;
    bool sweep_h_moments = false;
    std::vector<SweepAxis> axes;
    std::size_t cap = kDefaultSweepCap;
};

/// Parse and validate. Throws SchemaError naming the offending field.
Scenario parse_scenario(Json doc, const Overrides& overrides = {});
/// Reads a file; an empty file is treated as an empty document.
Scenario load_scenario(const std::filesystem::path& path, const Overrides& overrides = {});

/// Fixed columns of one CSV row.
struct Row {
    std::string theorem_id;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    double quad_err = 0.0;
    std::string status;
};

struct ItemResult {
    Json data;         // machine-readable result
    std::string text;  // human-readable lines
    Outcome outcome = Outcome::Pass;
    Row row;
    std::vector<double> cell;  // axis values (sweeps)
};

struct Report {
    Scenario scenario;
    std::vector<ItemResult> items;
    std::vector<std::string> notes;
    double wall_ms = 0.0;
    int exit_code = kExitOk;
};

/// Execute a scenario. `jobs` bounds the OpenMP thread count (0 = default).
Report run(const Scenario& s, int jobs = 0);

/// Deterministic JSON text (no wall time).
std::string to_machine(const Report& r);
std::string to_text(const Report& r);
/// CSV with columns scenario, cell_index, <axes...>, theorem_id, lhs, rhs,
/// margin, quad_err, status.
std::string to_csv(const Report& r);

/// %.17g formatting used in CSV and text output.
std::string format_double(double v);

/// Build a FuncDef from a scenario function binding: an expression string,
/// {"expr", "var", "domain"}, {"catalog", "params", "domain"}, or one of the
/// constructions {"combine": [f, g], "weights": [l, m]}, {"compose": [f, phi]},
/// {"segment": {"f", "phi", "m", "x", "y"}}.
FuncDef resolve_function(const Json& node, Interval default_domain, const std::string& path);

}  // namespace genconvex::scenario
