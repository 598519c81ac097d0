#pragma once

#include <string>
#include <vector>

namespace thermo {

/// One toleranced assertion. `value` is compared against `tolerance` by the
/// producer; the pair is always emitted together.
struct CheckRecord {
    std::string id;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct Report {
    std::vector<CheckRecord> records;

    /// Records `value <= tolerance`.
    void add_upper(std::string id, double value, double tolerance);
    void add(CheckRecord record) { records.push_back(std::move(record)); }

    bool passed() const;
    const CheckRecord* find(const std::string& id) const;
};

}  // namespace thermo
