#ifndef JENSEN_ERROR_HPP
#define JENSEN_ERROR_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace jensen {

/// Precondition violated by the caller (bad index, invalid parameter).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not produce a trustworthy value.
class ComputationError : public std::runtime_error {
 public:
  explicit ComputationError(const std::string& what,
                            std::optional<int> term = std::nullopt,
                            double achieved_error = 0.0)
      : std::runtime_error(what), term_(term), achieved_error_(achieved_error) {}

  /// Index of the bound term that failed, when known.
  std::optional<int> term() const noexcept { return term_; }
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  std::optional<int> term_;
  double achieved_error_;
};

/// Input data violates a contract (e.g. a sampler returned a nonpositive value).
class DataError : public std::runtime_error {
 public:
  DataError(const std::string& what, std::size_t index)
      : std::runtime_error(what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// Overflow/underflow outside the representable range.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what, double value = 0.0)
      : std::runtime_error(what), value_(value) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// Model definition is unusable (e.g. covariance not positive definite).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace jensen

#endif  // JENSEN_ERROR_HPP
