#ifndef FOVEASTREAM_ERRORS_HPP_
#define FOVEASTREAM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace foveastream {

// Violated value-domain contract (bad parameter, out-of-range input, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed text input. Carries the 1-based line number of the offending
// row when the source is a line-oriented file (0 when not applicable).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line = 0)
      : std::runtime_error(line > 0 ? message + " (line " + std::to_string(line) + ")"
                                    : message),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace foveastream

#endif  // FOVEASTREAM_ERRORS_HPP_
