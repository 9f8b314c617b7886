#pragma once

#include <stdexcept>
#include <string>

namespace racing {

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Query made with a position outside the drivable band (q > w).
struct OffTrackError : std::runtime_error {
  explicit OffTrackError(const std::string& what) : std::runtime_error(what) {}
};

// Every action at a decision point was pruned.
struct EmptyActionSetError : std::runtime_error {
  explicit EmptyActionSetError(const std::string& what) : std::runtime_error(what) {}
};

// The coupled control-gain system is numerically singular.
struct SingularCouplingError : std::runtime_error {
  explicit SingularCouplingError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace racing
