#ifndef KEDMD_ERROR_HPP
#define KEDMD_ERROR_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace kedmd {

/// Base class for every exception thrown by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid construction parameter (map parameter, node offset, radius ordering, ...).
class parameter_error : public error {
 public:
  using error::error;
};

/// Argument outside the domain of a function, e.g. x outside [-1, 1].
class domain_error : public error {
 public:
  using error::error;
};

/// The map carries no closed-form spectrum or is not of the required kind.
class unsupported_map_error : public error {
 public:
  using error::error;
};

/// Base for failures of a numerical procedure on valid input.
class numerical_error : public error {
 public:
  using error::error;
};

/// Dense eigenvalue iteration hit its cap. Carries whatever diagonal was reached.
class convergence_error : public numerical_error {
 public:
  convergence_error(const std::string& what, std::vector<std::complex<double>> partial)
      : numerical_error(what), partial_(std::move(partial)) {}

  const std::vector<std::complex<double>>& partial() const noexcept { return partial_; }

 private:
  std::vector<std::complex<double>> partial_;
};

class overflow_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

/// Analytic continuation of an inverse branch jumped along a sampling contour.
class branch_cut_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

/// Cauchy coefficients changed when the number of contour samples was doubled.
class aliasing_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

/// Gauss-Legendre entries changed when the order was doubled.
class quadrature_error : public numerical_error {
 public:
  using numerical_error::numerical_error;
};

/// Malformed or inconsistent experiment configuration.
class config_error : public error {
 public:
  using error::error;
};

}  // namespace kedmd

#endif  // KEDMD_ERROR_HPP
