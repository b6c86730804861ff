#ifndef KEDMD_SPECTRAL_HPP
#define KEDMD_SPECTRAL_HPP

///
/// \file spectral.hpp
///
/// Dense linear algebra used throughout: eigenvalues of small nonsymmetric
/// matrices, singular values, the truncated (epsilon) pseudoinverse, spectral
/// norms and the Schur row/column bound.
///
/// Storage and the Hessenberg/QR and SVD kernels come from Eigen; this header
/// adds balancing, the sort convention, iteration caps and error reporting.
///
/// EDMD matrices are built in extended precision (`real`, long double), and
/// real monomial pairs are additionally carried and solved in quad precision
/// (`wide`). The monomial Gram matrix has condition number growing like
/// (1 + sqrt 2)^(2N): rounding exact entries to double moves the eigenvalues
/// by 6e-10 at N = 10, and rounding to long double still moves them by 2e-9
/// at N = 12. Spectra are reported in double precision.
///

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/float128.hpp>
#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "kedmd/error.hpp"

namespace kedmd {

/// Working precision of the matrix constructions.
using real = long double;
using complex_real = std::complex<real>;
/// Precision of reported eigenvalues.
using cplx = std::complex<double>;

using Matrix = Eigen::Matrix<real, Eigen::Dynamic, Eigen::Dynamic>;
using CMatrix = Eigen::Matrix<complex_real, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<real, Eigen::Dynamic, 1>;
using CVector = Eigen::Matrix<complex_real, Eigen::Dynamic, 1>;
using Index = Eigen::Index;

/// Quad precision for the ill-conditioned real (monomial) solves.
using wide = boost::multiprecision::float128;
using WideMatrix = Eigen::Matrix<wide, Eigen::Dynamic, Eigen::Dynamic>;

/// Growth constant (1 + sqrt 2)^2 appearing in the EDMD convergence bounds.
/// Only used for bound reporting.
inline constexpr double gamma_constant = (1.0 + std::numbers::sqrt2) * (1.0 + std::numbers::sqrt2);

/// Largest matrix dimension accepted by the dense routines.
inline constexpr Index max_dense_dimension = 10000;

/// QR sweeps allowed per eigenvalue before giving up.
inline constexpr int qr_sweeps_per_eigenvalue = 30;

/// An ordered list of eigenvalues.
///
/// Values are sorted by descending modulus; ties are broken by descending
/// real part and then descending imaginary part.
struct Spectrum {
  std::vector<cplx> values;
  /// Number of singular directions kept by the pseudoinverse that produced
  /// the matrix (equals the dimension when nothing was truncated).
  Index eps_rank = 0;
  /// Set when the epsilon truncation discarded at least one singular value.
  bool rank_deficient = false;

  std::size_t size() const noexcept { return values.size(); }
  const cplx& operator[](std::size_t i) const { return values[i]; }
};

/// Strict weak ordering implementing the spectrum sort convention.
inline bool spectrum_order(const cplx& a, const cplx& b) {
  const double ma = std::abs(a);
  const double mb = std::abs(b);
  if (ma != mb) return ma > mb;
  if (a.real() != b.real()) return a.real() > b.real();
  return a.imag() > b.imag();
}

inline void sort_spectrum(std::vector<cplx>& values) {
  std::stable_sort(values.begin(), values.end(), spectrum_order);
}

namespace detail {

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a, const char* what) {
  if (!a.allFinite()) throw parameter_error(std::string(what) + ": matrix has non-finite entries");
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& a, const char* what) {
  if (a.rows() != a.cols()) throw parameter_error(std::string(what) + ": matrix is not square");
  if (a.rows() > max_dense_dimension)
    throw parameter_error(std::string(what) + ": dimension exceeds dense cap");
}

// Parlett-Reinsch balancing by powers of two; a similarity, so the spectrum
// is unchanged and no rounding is introduced.
template <typename Plain>
void balance(Plain& a) {
  using R = typename Eigen::NumTraits<typename Plain::Scalar>::Real;
  const Index n = a.rows();
  const R radix = 2;
  bool converged = false;
  while (!converged) {
    converged = true;
    for (Index i = 0; i < n; ++i) {
      R c = 0;
      R r = 0;
      for (Index j = 0; j < n; ++j) {
        if (j == i) continue;
        using std::abs;
        c += abs(a(j, i));
        r += abs(a(i, j));
      }
      if (c == 0 || r == 0) continue;
      R g = r / radix;
      R f = 1;
      const R s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < R(0.95) * s) {
        converged = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

}  // namespace detail

namespace detail {

template <typename T>
cplx to_cplx(const T& re, const T& im) {
  return {static_cast<double>(re), static_cast<double>(im)};
}

// Eigenvalues from the 1x1 and 2x2 diagonal blocks of a real quasi-triangular matrix.
template <typename Plain>
std::vector<cplx> quasi_triangular_eigenvalues(const Plain& t) {
  using S = typename Plain::Scalar;
  using std::abs;
  using std::sqrt;
  const Index n = t.rows();
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n;) {
    if (i + 1 < n && t(i + 1, i) != S(0)) {
      const S p = (t(i, i) - t(i + 1, i + 1)) / 2;
      const S disc = p * p + t(i, i + 1) * t(i + 1, i);
      const S mid = (t(i, i) + t(i + 1, i + 1)) / 2;
      if (disc < S(0)) {
        const S im = sqrt(-disc);
        out.push_back(to_cplx(mid, im));
        out.push_back(to_cplx(mid, S(-im)));
      } else {
        const S root = sqrt(disc);
        out.push_back(to_cplx(S(mid + root), S(0)));
        out.push_back(to_cplx(S(mid - root), S(0)));
      }
      i += 2;
    } else {
      out.push_back(to_cplx(t(i, i), S(0)));
      ++i;
    }
  }
  return out;
}

}  // namespace detail

/// All eigenvalues (with algebraic multiplicity) of a square matrix.
///
/// The matrix is balanced, reduced to Hessenberg form and driven to
/// (quasi-)triangular form by shifted QR: complex Schur for complex input,
/// real Schur in the input precision otherwise. Throws convergence_error,
/// carrying the partially reduced diagonal, if any eigenvalue needs more
/// than qr_sweeps_per_eigenvalue sweeps.
template <typename Derived>
Spectrum eigenvalues(const Eigen::MatrixBase<Derived>& a) {
  detail::require_square(a, "eigenvalues");
  detail::require_finite(a, "eigenvalues");
  const Index n = a.rows();
  Spectrum out;
  out.eps_rank = n;
  if (n == 0) return out;

  using Scalar = typename Derived::Scalar;
  bool converged = true;
  if constexpr (Eigen::NumTraits<Scalar>::IsComplex) {
    using Work = typename Derived::PlainObject;
    Work work = a;
    detail::balance(work);
    Eigen::ComplexSchur<Work> schur(n);
    schur.setMaxIterations(qr_sweeps_per_eigenvalue * n);
    schur.compute(work, /*computeU=*/false);
    const Work& t = schur.matrixT();
    out.values.resize(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) out.values[static_cast<std::size_t>(i)] = detail::to_cplx(t(i, i).real(), t(i, i).imag());
    converged = schur.info() == Eigen::Success;
  } else {
    using Work = typename Derived::PlainObject;
    Work work = a;
    detail::balance(work);
    Eigen::RealSchur<Work> schur(n);
    schur.setMaxIterations(qr_sweeps_per_eigenvalue * n);
    schur.compute(work, /*computeU=*/false);
    out.values = detail::quasi_triangular_eigenvalues(Work(schur.matrixT()));
    converged = schur.info() == Eigen::Success;
  }
  if (!converged) {
    throw convergence_error("eigenvalues: shifted QR did not converge within " +
                                std::to_string(qr_sweeps_per_eigenvalue) + " sweeps per eigenvalue",
                            out.values);
  }
  sort_spectrum(out.values);
  return out;
}

/// Singular values in descending order.
template <typename Derived>
auto singular_values(const Eigen::MatrixBase<Derived>& a) {
  using Plain = typename Derived::PlainObject;
  using R = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  using Result = Eigen::Matrix<R, Eigen::Dynamic, 1>;
  detail::require_finite(a, "singular_values");
  if (a.size() == 0) return Result();
  // One-sided Jacobi keeps high relative accuracy; divide and conquer above desk sizes.
  if (std::max(a.rows(), a.cols()) <= 100) {
    Eigen::JacobiSVD<Plain> svd(a.derived());
    return Result(svd.singularValues());
  }
  Eigen::BDCSVD<Plain> svd(a.derived());
  return Result(svd.singularValues());
}

/// Result of a truncated pseudoinverse.
template <typename Plain>
struct PseudoInverse {
  Plain matrix;
  /// Singular values kept.
  Index rank = 0;
  double sigma_max = 0.0;
};

/// SVD pseudoinverse where singular values sigma <= eps * sigma_max are
/// mapped to zero instead of inverted.
template <typename Derived>
PseudoInverse<typename Derived::PlainObject> truncated_pseudoinverse(const Eigen::MatrixBase<Derived>& h,
                                                                     double eps) {
  using Plain = typename Derived::PlainObject;
  if (!(eps >= 0.0)) throw parameter_error("pseudoinverse: eps must be non-negative");
  detail::require_finite(h, "pseudoinverse");

  PseudoInverse<Plain> out;
  out.matrix = Plain::Zero(h.cols(), h.rows());
  if (h.size() == 0) return out;

  Eigen::JacobiSVD<Plain> svd(h.derived(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sigma = svd.singularValues();
  out.sigma_max = sigma.size() > 0 ? static_cast<double>(sigma(0)) : 0.0;
  using R = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  const R cut = R(eps) * R(sigma(0));
  for (Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) <= cut || sigma(i) == 0) continue;
    out.matrix.noalias() += (svd.matrixV().col(i) / sigma(i)) * svd.matrixU().col(i).adjoint();
    ++out.rank;
  }
  return out;
}

template <typename Derived>
typename Derived::PlainObject pseudoinverse(const Eigen::MatrixBase<Derived>& h, double eps) {
  return truncated_pseudoinverse(h, eps).matrix;
}

/// Largest singular value (0 for an empty matrix).
template <typename Derived>
double spectral_norm(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return 0.0;
  return static_cast<double>(singular_values(a)(0));
}

/// Schur's bound sqrt(C * R) on the spectral norm, with R the sum over rows
/// of the largest entry modulus in that row and C the same over columns.
template <typename Derived>
double schur_bound(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return 0.0;
  const auto m = a.cwiseAbs().eval();
  const auto row_sum = m.rowwise().maxCoeff().sum();
  const auto col_sum = m.colwise().maxCoeff().sum();
  using std::sqrt;
  return static_cast<double>(sqrt(row_sum * col_sum));
}

/// V A V^{-1} with V = diag(1, rho, rho^2, ...).
template <typename Derived>
typename Derived::PlainObject scale_similarity(const Eigen::MatrixBase<Derived>& a, double rho) {
  detail::require_square(a, "scale_similarity");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw parameter_error("scale_similarity: rho must be positive");
  const Index n = a.rows();
  using R = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  using std::pow;
  // The double-range check keeps results independent of the storage type.
  if (n > 1) {
    const double top = std::pow(rho, static_cast<double>(n - 1));
    if (!std::isfinite(top) || top == 0.0 || !std::isfinite(1.0 / top))
      throw overflow_error("scale_similarity: rho^(N-1) leaves the floating range");
  }
  typename Derived::PlainObject out = a;
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i)
      if (i != j) out(i, j) *= R(pow(R(rho), R(i - j)));
  if (!out.allFinite()) throw overflow_error("scale_similarity: scaled matrix overflowed");
  return out;
}

}  // namespace kedmd

#endif  // KEDMD_SPECTRAL_HPP
