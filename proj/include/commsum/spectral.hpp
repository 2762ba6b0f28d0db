#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace commsum {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;

/// Dense square complex matrix with finite entries; the finite-dimensional
/// stand-in for a compact operator.
class ComplexMatrix {
 public:
  /// Throws DomainError unless `m` is square, non-empty and finite.
  explicit ComplexMatrix(DenseMatrix m);

  /// Row-major entries; `entries.size()` must equal `dim * dim`.
  ComplexMatrix(std::size_t dim, std::span<const Complex> entries);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix zero(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const Complex> diag);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  Complex operator()(std::size_t row, std::size_t col) const {
    return m_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }
  const DenseMatrix& dense() const noexcept { return m_; }

  /// Row-major copy of the entries.
  std::vector<Complex> entries() const;

  ComplexMatrix adjoint() const;
  bool is_hermitian(double tol = 1e-12) const;

  friend ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator*(Complex z, const ComplexMatrix& a);

 private:
  DenseMatrix m_;
};

/// Frobenius norm.
double frobenius_norm(const ComplexMatrix& m);

/// Stable 64-bit FNV-1a hash of the entry bit patterns, rendered as 16 hex digits.
std::string fingerprint(const ComplexMatrix& m);

/// Modulus rounded to 12 significant digits. Every ordering decision and every
/// `|lambda| >= 1` threshold test goes through this value.
double rounded_modulus(Complex z);

/// Eigenvalues ordered by nonincreasing modulus, repeated by algebraic
/// multiplicity. Positions past the stored values are zero.
class EigenSequence {
 public:
  EigenSequence() = default;

  /// Sorts `values` into canonical order. `logical_length` defaults to the
  /// number of values and must not be smaller.
  explicit EigenSequence(std::vector<Complex> values,
                         std::optional<std::size_t> logical_length = std::nullopt);

  std::span<const Complex> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::size_t logical_length() const noexcept { return logical_length_; }

  /// 1-based access; zero beyond the stored values.
  Complex at(std::size_t n) const noexcept;

  /// Multiplies every value by `alpha` and re-sorts.
  EigenSequence scaled(Complex alpha) const;

 private:
  std::vector<Complex> values_;
  std::size_t logical_length_ = 0;
};

/// Canonical order: rounded modulus descending, then argument in [0, 2pi)
/// ascending, then real part descending.
bool canonical_before(Complex a, Complex b) noexcept;

/// Finite nonincreasing nonnegative list followed by zeros.
struct FiniteValues {
  std::vector<double> values;
};

/// s_n = c * n^(-a).
struct PowerLaw {
  double c;
  double a;
};

/// s_n = c * q^n.
struct GeometricLaw {
  double c;
  double q;
};

/// Nonnegative nonincreasing real sequence: singular values, diagonal entries
/// or a symbolic decay law.
class ScalarSequence {
 public:
  using Law = std::variant<FiniteValues, PowerLaw, GeometricLaw>;

  /// Throws DomainError if the list is negative, non-finite or increasing.
  static ScalarSequence finite(std::vector<double> values);
  static ScalarSequence power(double c, double a);
  static ScalarSequence geometric(double c, double q);

  const Law& law() const noexcept { return law_; }
  bool is_finite() const noexcept { return std::holds_alternative<FiniteValues>(law_); }

  /// Stored values of a finite sequence; empty for symbolic laws.
  std::span<const double> finite_values() const noexcept;

  /// 1-based value at integer index n >= 1.
  double value(std::size_t n) const;

  /// First `count` values.
  std::vector<double> prefix(std::size_t count) const;

 private:
  explicit ScalarSequence(Law law) : law_(std::move(law)) {}
  Law law_;
};

/// s_r with the convention s_r = s_{floor(r)+1} for non-integer r.
/// Throws DomainError for r <= 0.
double frac_index(const ScalarSequence& s, double r);

/// Full dense eigendecomposition (complex Schur form). Throws NumericalError
/// carrying the matrix fingerprint if the QR iteration does not converge.
EigenSequence eigenvalue_sequence(const ComplexMatrix& m);

/// Singular values, nonincreasing, length dim.
ScalarSequence singular_sequence(const ComplexMatrix& m);

struct HermitianSplit {
  ComplexMatrix h;
  ComplexMatrix k;
};

/// T = H + iK with H = (T + T*)/2 and K = (T - T*)/(2i).
HermitianSplit hermitian_split(const ComplexMatrix& t);

/// F(z) = (T + z T*)/2.
ComplexMatrix pencil(const ComplexMatrix& t, Complex z);

/// |T| = (T*T)^(1/2) from a hermitian eigendecomposition of T*T, with
/// negative rounding-error eigenvalues clamped to zero.
ComplexMatrix abs_operator(const ComplexMatrix& t);

/// Block-diagonal A (+) B.
ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace commsum
