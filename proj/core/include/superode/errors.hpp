#ifndef SUPERODE_ERRORS_HPP
#define SUPERODE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace superode {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two Grassmann operands were built over different generator budgets.
class BudgetMismatch : public Error {
 public:
  using Error::Error;
};

/// A generator beyond the declared budget L was requested.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

class ParityError : public Error {
 public:
  using Error::Error;
};

class PolicyMismatch : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested at a point outside the domain (poles, singular steps).
class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// Numerical integration produced a non-finite state.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double last_valid_time)
      : Error(what), last_valid_time_(last_valid_time) {}
  double last_valid_time() const noexcept { return last_valid_time_; }

 private:
  double last_valid_time_;
};

/// Input malformed: unknown names, wrong shapes, bad syntax.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace superode

#endif  // SUPERODE_ERRORS_HPP
