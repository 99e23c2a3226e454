#pragma once

#include <stdexcept>
#include <string>

namespace medest {

// Not enough observations for the requested statistic (e.g. a pairwise
// estimator on a single point).
class insufficient_data : public std::runtime_error {
 public:
  explicit insufficient_data(const std::string& what)
      : std::runtime_error(what) {}
};

// A planner's admissibility condition is violated; the message cites the
// condition so CLI users see which constraint failed.
class infeasible_plan : public std::runtime_error {
 public:
  explicit infeasible_plan(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace medest
