// nhmsim: scenario runner for the non-Hermitian measurement library.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "nhm/version.hpp"
#include "nhm_cli/runner.hpp"
#include "nhm_cli/scenario.hpp"

namespace fs = std::filesystem;
using namespace nhm::cli;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

// A bare name resolves to a bundled scenario when no such file exists.
fs::path resolve_scenario(const std::string& arg, const fs::path& dir) {
    const fs::path p(arg);
    if (fs::exists(p)) return p;
    const fs::path bundled = dir / (arg + ".json");
    if (p.extension().empty() && fs::exists(bundled)) return bundled;
    throw IoError("scenario file not found: " + arg);
}

int report(const std::exception& e, int code, bool quiet, const std::string& context) {
    if (!quiet || code != kExitOk) std::cerr << "nhmsim: " << context << e.what() << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Measurements on systems with effective non-Hermitian Hamiltonians", "nhmsim"};
    app.set_version_flag("--version", std::string(nhm::kVersion));
    app.require_subcommand(1);

    std::string out_dir;
    std::optional<std::uint64_t> seed;
    int threads = 1;
    bool quiet = false;
    std::string scenario_dir = default_scenario_dir().string();

    app.add_option("--out-dir", out_dir, "Output directory (default: $NHM_OUT_DIR, else ./nhm_out)");
    app.add_option("--seed", seed, "Override the scenario seed");
    app.add_option("--threads", threads, "Worker threads for data-parallel sweeps")->check(CLI::Range(1, 1024));
    app.add_flag("--quiet", quiet, "Only report errors");
    app.add_option("--scenario-dir", scenario_dir, "Directory of bundled scenarios");

    std::string file;
    auto* run = app.add_subcommand("run", "Run a scenario file (or bundled scenario name)");
    run->add_option("file", file, "Scenario file")->required();
    auto* validate = app.add_subcommand("validate", "Parse and validate a scenario without running it");
    validate->add_option("file", file, "Scenario file")->required();
    auto* list = app.add_subcommand("list", "List bundled scenarios");
    for (auto* sc : {run, validate, list}) sc->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    // diagnostics on stderr; stdout carries results only
    spdlog::set_default_logger(spdlog::stderr_color_mt("nhmsim"));
    if (quiet) spdlog::set_level(spdlog::level::err);
    if (out_dir.empty()) {
        const char* env = std::getenv("NHM_OUT_DIR");
        out_dir = env && *env ? env : "nhm_out";
    }

    std::string context;
    try {
        if (list->parsed()) {
            for (const auto& path : list_scenario_files(scenario_dir)) {
                context = path.filename().string() + ": ";
                const Scenario s = load_scenario(path);
                std::cout << s.name << "\t" << to_string(s.kind) << "\t"
                          << (s.criterion ? "criterion " + std::to_string(*s.criterion) : std::string("-")) << "\t"
                          << s.description << "\n";
            }
            return kExitOk;
        }
        const fs::path path = resolve_scenario(file, scenario_dir);
        context = path.string() + ": ";
        const Scenario s = load_scenario(path, seed);
        if (validate->parsed()) {
            if (!quiet) std::cout << "ok " << s.name << " (" << to_string(s.kind) << ")\n";
            return kExitOk;
        }
        context = "scenario " + s.name + ": ";
        RunOptions opts;
        opts.out_dir = out_dir;
        opts.threads = threads;
        const RunReport r = run_scenario(s, opts);
        if (!quiet) {
            std::cout << r.summary.dump(2) << "\n";
            std::cout << "wrote " << r.files.size() << " files to " << r.directory.string() << "\n";
        }
        return kExitOk;
    } catch (const ParseError& e) {
        return report(e, kExitValidation, quiet, context);
    } catch (const ValidationError& e) {
        return report(e, kExitValidation, quiet, context);
    } catch (const IoError& e) {
        return report(e, kExitIo, quiet, context);
    } catch (const nhm::NumericalError& e) {
        return report(e, kExitNumerical, quiet, context);
    } catch (const nhm::InvalidArgument& e) {
        return report(e, kExitValidation, quiet, context);
    } catch (const fs::filesystem_error& e) {
        return report(e, kExitIo, quiet, context);
    } catch (const std::exception& e) {
        return report(e, kExitNumerical, quiet, context);
    }
}
