#include "thermo/budget.hpp"

#include <limits>
#include <string>

#include "thermo/errors.hpp"

namespace thermo {

void Budget::require_rows(std::size_t rows) const {
    if (rows > memory_bytes / sizeof(double)) {
        throw BudgetExceededError(std::to_string(rows) + " diagonal entries exceed the budget of " +
                                  std::to_string(memory_bytes >> 20) + " MiB");
    }
}

std::size_t Budget::diagonal_rows() const { return memory_bytes / sizeof(double); }

void Budget::require_dense(std::size_t rows, int matrices) const {
    if (rows > max_rows) {
        throw BudgetExceededError(std::to_string(rows) + " rows exceed the dense row budget of " +
                                  std::to_string(max_rows));
    }
    const long double bytes = static_cast<long double>(rows) * rows * 16.0L * matrices;
    if (bytes > static_cast<long double>(memory_bytes)) {
        throw BudgetExceededError(std::to_string(rows) + "x" + std::to_string(rows) +
                                  " dense problem needs ~" +
                                  std::to_string(static_cast<unsigned long long>(bytes / (1 << 20))) +
                                  " MiB, budget is " + std::to_string(memory_bytes >> 20) + " MiB");
    }
}

std::size_t checked_pow(std::size_t base, int exp, std::size_t cap) {
    std::size_t out = 1;
    for (int i = 0; i < exp; ++i) {
        if (base != 0 && out > cap / base) {
            throw BudgetExceededError(std::to_string(base) + "^" + std::to_string(exp) +
                                      " exceeds the cap of " + std::to_string(cap));
        }
        out *= base;
    }
    if (out > cap) {
        throw BudgetExceededError(std::to_string(base) + "^" + std::to_string(exp) +
                                  " exceeds the cap of " + std::to_string(cap));
    }
    return out;
}

}  // namespace thermo
