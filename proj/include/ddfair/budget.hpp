#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

#include "ddfair/errors.hpp"

namespace ddfair {

struct SearchBudget {
  std::uint64_t max_states = 10'000'000;
  std::optional<std::chrono::milliseconds> time_limit;
};

// Counts visited states; throws BudgetExceeded once either limit is passed.
class BudgetMeter {
 public:
  explicit BudgetMeter(const SearchBudget& budget)
      : budget_(budget), start_(std::chrono::steady_clock::now()) {}

  void tick() {
    if (++states_ > budget_.max_states) {
      throw BudgetExceeded("undecided at this scale: more than " + std::to_string(budget_.max_states) +
                           " states");
    }
    if (budget_.time_limit && (states_ & 0xfff) == 0 &&
        std::chrono::steady_clock::now() - start_ > *budget_.time_limit) {
      throw BudgetExceeded("undecided at this scale: time limit reached");
    }
  }

  std::uint64_t states() const { return states_; }

 private:
  SearchBudget budget_;
  std::chrono::steady_clock::time_point start_;
  std::uint64_t states_ = 0;
};

}  // namespace ddfair
