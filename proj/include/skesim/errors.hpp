#pragma once

#include <stdexcept>

namespace skesim {

// File and stream failures. The CLI maps these to exit code 1.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid data or configuration: disconnected skeletons, bad configs, roots
// outside the region, empty sample sets. The CLI maps these to exit code 2.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace skesim
