#include "thermo/report.hpp"

#include <algorithm>
#include <cmath>

namespace thermo {

void Report::add_upper(std::string id, double value, double tolerance) {
    const bool pass = std::isfinite(value) && value <= tolerance;
    records.push_back({std::move(id), value, tolerance, pass});
}

bool Report::passed() const {
    return std::all_of(records.begin(), records.end(), [](const CheckRecord& r) { return r.pass; });
}

const CheckRecord* Report::find(const std::string& id) const {
    auto it = std::find_if(records.begin(), records.end(), [&](const CheckRecord& r) { return r.id == id; });
    return it == records.end() ? nullptr : &*it;
}

}  // namespace thermo
