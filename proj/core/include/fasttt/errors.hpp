#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fasttt {

/// Dimension or size mismatch between operands.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Multi-index, mode, or split position outside the valid range.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// A precondition that the algorithm relies on does not hold for the input
/// (e.g. a rounding sweep called on cores that are not orthonormal).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Non-finite matrix entries handed to a dense factorization.
class NumericalError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed external input: files, CLI arguments, manifests.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
  InputError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  /// 1-based line number of the offending input, 0 when not line-oriented.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_ = 0;
};

/// Dense materialization refused because it would exceed the entry cap.
class SizeLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace fasttt
