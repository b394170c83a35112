#ifndef DYNID__ERRORS_HPP_
#define DYNID__ERRORS_HPP_

#include <stdexcept>

namespace dynid {

/// Unreadable or malformed input files, bad configuration values.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical procedure could not complete (singular system,
/// non-convergence, degenerate data).
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dynid

#endif  // DYNID__ERRORS_HPP_
