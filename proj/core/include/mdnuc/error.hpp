#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mdnuc {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid generator, planner or sensor parameter.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed terrain, path or config file. Carries the 1-based line number
/// where the problem was detected (0 when not line-specific).
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Query outside the domain of a function (outside the heightfield, depth <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Meshing failures: ROI under-resolved or fragmented.
class MeshError : public Error {
 public:
  using Error::Error;
};

/// A face cannot be reached by the skeleton once blocked edges are removed.
class UnreachableRegionError : public Error {
 public:
  UnreachableRegionError(const std::string& what, std::size_t face, long region)
      : Error(what), face_(face), region_(region) {}

  std::size_t face() const noexcept { return face_; }
  /// Region of the unreachable face, or -1 when no partition was involved.
  long region() const noexcept { return region_; }

 private:
  std::size_t face_;
  long region_;
};

/// Simulation could not run (empty path, bad grid parameters).
class SimulationError : public Error {
 public:
  using Error::Error;
};

}  // namespace mdnuc
