// genconvex: run generalized-convexity scenarios from the command line.
//
//   genconvex run <file> [--out <path>] [--format text|machine] [--jobs N] [--csv <path>]
//   genconvex sweep <file> --csv <path>
//   genconvex falsify <file>
//
// --seed, --tol-quad and --tol-report override the scenario's fields.
// GENCONVEX_JOBS supplies the default for --jobs.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "genconvex/errors.hpp"
#include "genconvex/scenario.hpp"

namespace sc = genconvex::scenario;

namespace {

struct Options {
    std::string file;
    std::string out;
    std::string format = "text";
    std::string csv;
    int jobs = 0;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol_quad;
    std::optional<double> tol_report;
};

bool write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    os << content;
    return static_cast<bool>(os);
}

int execute(const Options& o, std::optional<sc::Command> forced, bool need_sweep) {
    sc::Overrides ov;
    ov.seed = o.seed;
    ov.tol_quad = o.tol_quad;
    ov.tol_report = o.tol_report;
    ov.command = forced;
    sc::Scenario s;
    try {
        s = sc::load_scenario(o.file, ov);
    } catch (const genconvex::SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return sc::kExitUsage;
    }
    if (need_sweep && s.command != sc::Command::Sweep) {
        std::cerr << "error: scenario command is '" << sc::to_string(s.command) << "', not 'sweep'\n";
        return sc::kExitUsage;
    }

    const sc::Report report = sc::run(s, o.jobs);
    if (o.format == "machine")
        std::cout << sc::to_machine(report);
    else
        std::cout << sc::to_text(report);
    if (!o.out.empty() && !write_file(o.out, sc::to_machine(report))) {
        std::cerr << "error: cannot write " << o.out << "\n";
        return sc::kExitUsage;
    }
    if (!o.csv.empty() && !write_file(o.csv, sc::to_csv(report))) {
        std::cerr << "error: cannot write " << o.csv << "\n";
        return sc::kExitUsage;
    }
    return report.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized convexity checks and Hermite-Hadamard-type inequality verification"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(sc::kVersion));

    Options o;
    if (const char* env = std::getenv("GENCONVEX_JOBS")) {
        try {
            o.jobs = std::stoi(env);
        } catch (const std::exception&) {
            std::cerr << "error: GENCONVEX_JOBS must be an integer\n";
            return sc::kExitUsage;
        }
    }

    auto add_common = [&o](CLI::App* cmd) {
        cmd->add_option("file", o.file, "Scenario file (JSON)")->required();
        cmd->add_option("--out", o.out, "Also write the machine-readable report here");
        cmd->add_option("--format", o.format, "Report format on stdout")
            ->check(CLI::IsMember({"text", "machine"}));
        cmd->add_option("--jobs", o.jobs, "Worker threads (default: GENCONVEX_JOBS)")->check(CLI::NonNegativeNumber);
        cmd->add_option("--seed", o.seed, "Override the scenario seed");
        cmd->add_option("--tol-quad", o.tol_quad, "Override the quadrature tolerance")->check(CLI::PositiveNumber);
        cmd->add_option("--tol-report", o.tol_report, "Override the report tolerance")->check(CLI::NonNegativeNumber);
    };

    auto* run = app.add_subcommand("run", "Run a scenario");
    add_common(run);
    run->add_option("--csv", o.csv, "Write result rows as CSV");

    auto* sweep = app.add_subcommand("sweep", "Run a sweep scenario and write CSV");
    add_common(sweep);
    sweep->add_option("--csv", o.csv, "CSV output path")->required();

    auto* falsify = app.add_subcommand("falsify", "Search for a counterexample to the scenario's class");
    add_common(falsify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return e.get_exit_code() == 0 ? rc : sc::kExitUsage;
    }

    if (*run) return execute(o, std::nullopt, false);
    if (*sweep) return execute(o, std::nullopt, true);
    return execute(o, sc::Command::Falsify, false);
}
