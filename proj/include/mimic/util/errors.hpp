#pragma once

#include <stdexcept>
#include <string>

namespace mimic::util {

// config/file/schema problems; CLI maps these to exit code 2
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// shape or layer-dimension mismatches in the network engine
struct DimensionError : ValidationError {
  explicit DimensionError(const std::string& what) : ValidationError(what) {}
};

// numeric failures during training/optimization; CLI maps to exit code 3
struct TrainingError : std::runtime_error {
  explicit TrainingError(const std::string& what) : std::runtime_error(what) {}
};

// demonstration generation failures (unreachable placements, budget exhausted)
struct GenerationError : std::runtime_error {
  explicit GenerationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mimic::util
