#pragma once

#include <stdexcept>
#include <string>

namespace lmf {

// Thrown when a computation leaves its domain of validity at runtime
// (blow-up guard tripped, Picard iteration stopped contracting).  The CLI
// maps this to exit code 2, as opposed to argument/config validation errors
// (std::invalid_argument, exit 1) and file problems (IoError, exit 3).
class NumericalAbort : public std::runtime_error {
public:
  explicit NumericalAbort(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lmf
