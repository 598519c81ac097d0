// Command-line front end: parses a model file, runs one command, writes the
// CSV/JSON artifacts into --out and prints every check with its tolerance.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "thermo/commands.hpp"
#include "thermo/errors.hpp"

namespace fs = std::filesystem;

namespace {

std::pair<int, int> parse_volumes(const std::string& text) {
    const auto colon = text.find(':');
    try {
        if (colon == std::string::npos) {
            const int n = std::stoi(text);
            return {n, n};
        }
        return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
    } catch (const std::exception&) {
        throw thermo::UsageError("--volumes expects N_MIN:N_MAX, got '" + text + "'");
    }
}

std::size_t parse_mib(const std::string& text, const char* source) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(text, &pos);
        if (pos != text.size() || v == 0) throw std::invalid_argument(text);
        return static_cast<std::size_t>(v) << 20;
    } catch (const std::exception&) {
        throw thermo::UsageError(fmt::format("{} expects a positive integer MiB count, got '{}'", source, text));
    }
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw thermo::Error("cannot write " + path.string());
    out << content;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-volume thermodynamic formalism checks"};
    std::string model_path, command, volumes, boundary, out_dir = ".", budget_mib;
    double beta = 0.0;
    int order = 0;
    long long coefficients = 0;
    std::uint64_t seed = 0;
    app.add_option("--model", model_path, "Model file (YAML, or JSON by extension)")->required();
    app.add_option("--command", command, "One of: pressure, equilibrium, kms-check, evolve-check, variational, "
                                         "bridge, properties, riesz-coeffs, riesz-verify")
        ->required();
    auto* vol_opt = app.add_option("--volumes", volumes, "Volume range N_MIN:N_MAX");
    auto* beta_opt = app.add_option("--beta", beta, "Inverse temperature");
    auto* bnd_opt = app.add_option("--boundary", boundary, "open|periodic");
    auto* order_opt = app.add_option("--order", order, "Markov order for variational");
    auto* coef_opt = app.add_option("--coefficients", coefficients, "Riesz |n| range (default 100)");
    app.add_option("--seed", seed, "PRNG seed");
    app.add_option("--out", out_dir, "Output directory");
    auto* budget_opt = app.add_option("--budget-mib", budget_mib, "Memory budget in MiB (env THERMO_BUDGET_MIB)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? thermo::kExitPass : thermo::kExitUsage;
    }

    try {
        thermo::RunOptions opts;
        opts.command = command;
        opts.seed = seed;
        if (*vol_opt) {
            const auto [lo, hi] = parse_volumes(volumes);
            opts.n_min = lo;
            opts.n_max = hi;
        }
        if (*beta_opt) opts.beta = beta;
        if (*bnd_opt) {
            try {
                opts.boundary = thermo::parse_boundary(boundary);
            } catch (const thermo::Error& e) {
                throw thermo::UsageError(e.what());
            }
        }
        if (*order_opt) opts.order = order;
        if (*coef_opt) opts.coefficient_max = coefficients;
        if (*budget_opt) {
            opts.budget.memory_bytes = parse_mib(budget_mib, "--budget-mib");
        } else if (const char* env = std::getenv("THERMO_BUDGET_MIB"); env && *env) {
            opts.budget.memory_bytes = parse_mib(env, "THERMO_BUDGET_MIB");
        }

        const thermo::ModelFile model = thermo::parse_model(model_path);
        const thermo::RunReport report = thermo::run(model, opts);

        fs::create_directories(out_dir);
        for (const auto& a : report.artifacts) write_file(fs::path(out_dir) / a.filename, a.content);
        for (const auto& r : report.report.records) {
            std::cout << fmt::format("{:<6} {}  value={}  tolerance={}\n", r.pass ? "PASS" : "FAIL", r.id,
                                     thermo::format_number(r.value), thermo::format_number(r.tolerance));
        }
        std::cout << fmt::format("{} {} digest={}\n", report.passed() ? "PASS" : "FAIL", report.command,
                                 report.inputs_digest);
        return report.passed() ? thermo::kExitPass : thermo::kExitCheckFailure;
    } catch (const thermo::BudgetExceededError& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return thermo::kExitBudget;
    } catch (const thermo::UsageError& e) {
        std::cerr << "usage: " << e.what() << '\n';
        return thermo::kExitUsage;
    } catch (const thermo::ParseError& e) {
        std::cerr << fmt::format("{}:{}:{}: {}\n", model_path, e.line(), e.column(), e.what());
        return thermo::kExitUsage;
    } catch (const thermo::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return thermo::kExitUsage;
    }
}
