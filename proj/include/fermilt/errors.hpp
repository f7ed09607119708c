#pragma once

#include <stdexcept>
#include <string>

namespace fermilt {

struct GridMismatch : std::invalid_argument {
  explicit GridMismatch(const std::string& what) : std::invalid_argument(what) {}
};

struct ConfigError : std::invalid_argument {
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

struct NearRankDeficient : std::runtime_error {
  explicit NearRankDeficient(const std::string& what) : std::runtime_error(what) {}
};

struct NotOrthonormal : std::runtime_error {
  explicit NotOrthonormal(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateField : std::runtime_error {
  explicit DegenerateField(const std::string& what) : std::runtime_error(what) {}
};

struct BandLimitViolation : std::runtime_error {
  explicit BandLimitViolation(const std::string& what) : std::runtime_error(what) {}
};

struct DivergingObjective : std::runtime_error {
  explicit DivergingObjective(const std::string& what) : std::runtime_error(what) {}
};

struct InsufficientRecords : std::runtime_error {
  explicit InsufficientRecords(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fermilt
