#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace linecell {

// Base class for numerical failures (quadrature breakdown, stalled solvers).
// Input-validation problems use std::invalid_argument / std::domain_error
// instead; catching numerical_error therefore isolates "the computation could
// not be completed to tolerance" from "the request was malformed".
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what)
      : std::runtime_error(what) {}
};

// Adaptive quadrature ran out of subdivision depth before reaching the
// requested tolerance. Carries the error estimate actually achieved.
class quadrature_error : public numerical_error {
 public:
  quadrature_error(const std::string& what, double achieved_error)
      : numerical_error(what), achieved_error_(achieved_error) {}

  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

// An iterative solver exhausted its iteration budget. Carries the iterate
// sequence for diagnosis.
class convergence_error : public numerical_error {
 public:
  convergence_error(const std::string& what, std::vector<double> trace)
      : numerical_error(what), trace_(std::move(trace)) {}

  const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  std::vector<double> trace_;
};

}  // namespace linecell
