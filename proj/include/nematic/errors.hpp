#pragma once

#include <stdexcept>
#include <string>

namespace nematic {

/// A time step produced an inadmissible state (|n| >= 1 or a moment above
/// one); the step size should be reduced.
class InstabilityError : public std::runtime_error {
 public:
  explicit InstabilityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nematic
