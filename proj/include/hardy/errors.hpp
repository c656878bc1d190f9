#pragma once

#include <stdexcept>
#include <string>

namespace hardy {

/// Parameter outside its documented domain (bad exponent range, nonpositive
/// radius, malformed descriptor). The message names the violated bound.
class domain_error : public std::invalid_argument {
public:
  explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A hypothesis of the inequality under test fails for the given inputs
/// (non-integrable weight, zero denominator, missing monotonicity flag).
/// Distinct from numerical failure: the computation was never attempted.
class precondition_error : public std::runtime_error {
public:
  precondition_error(const std::string& clause, const std::string& detail)
      : std::runtime_error(clause + ": " + detail), clause_(clause) {}
  const std::string& clause() const { return clause_; }

private:
  std::string clause_;
};

/// An integrand produced NaN or a negative value; carries the abscissa.
class evaluation_error : public std::runtime_error {
public:
  evaluation_error(const std::string& what, double abscissa)
      : std::runtime_error(what + " at rho = " + std::to_string(abscissa)),
        abscissa_(abscissa) {}
  double abscissa() const { return abscissa_; }

private:
  double abscissa_;
};

/// Query outside the stored range of a tabulated object.
class extrapolation_error : public std::out_of_range {
public:
  explicit extrapolation_error(const std::string& what) : std::out_of_range(what) {}
};

/// File or format problem while reading external data.
class io_error : public std::runtime_error {
public:
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace hardy
