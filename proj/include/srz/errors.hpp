#pragma once

#include <stdexcept>
#include <string>

namespace srz {

struct DegenerateHorizon : std::runtime_error {
  explicit DegenerateHorizon(const std::string& msg) : std::runtime_error(msg) {}
};

struct OutOfInterval : std::runtime_error {
  explicit OutOfInterval(const std::string& msg) : std::runtime_error(msg) {}
};

struct HypothesisViolated : std::runtime_error {
  explicit HypothesisViolated(const std::string& msg) : std::runtime_error(msg) {}
};

struct NoFeasibleTime : std::runtime_error {
  explicit NoFeasibleTime(const std::string& msg) : std::runtime_error(msg) {}
};

struct InfeasibleVolume : std::runtime_error {
  explicit InfeasibleVolume(const std::string& msg) : std::runtime_error(msg) {}
};

struct EmptyTrace : std::runtime_error {
  explicit EmptyTrace(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace srz
