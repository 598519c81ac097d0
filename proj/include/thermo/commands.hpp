#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "thermo/budget.hpp"
#include "thermo/model_file.hpp"
#include "thermo/report.hpp"

namespace thermo {

/// Commands accepted by run().
const std::vector<std::string>& command_names();

struct RunOptions {
    std::string command;
    std::optional<int> n_min;
    std::optional<int> n_max;
    std::optional<double> beta;
    std::optional<Boundary> boundary;
    std::optional<int> order;
    std::optional<std::int64_t> coefficient_max;  // riesz |n| range
    std::uint64_t seed = 0;
    Budget budget;
};

struct Artifact {
    std::string filename;
    std::string content;
};

struct RunReport {
    std::string command;
    std::string inputs_digest;
    Report report;
    std::vector<Artifact> artifacts;  // CSV and JSON outputs, byte-deterministic

    bool passed() const { return report.passed(); }
};

/// Thrown for an unknown command or one that does not apply to the model kind.
class UsageError : public Error {
public:
    using Error::Error;
};

RunReport run(const ModelFile& model, const RunOptions& options);

/// '.' decimal, 17 significant digits.
std::string format_number(double value);

/// report.json body for a run.
std::string report_json(const RunReport& run);

/// Process exit codes.
inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBudget = 3;

}  // namespace thermo
