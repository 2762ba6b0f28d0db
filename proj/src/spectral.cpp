#include "commsum/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "commsum/error.hpp"

namespace commsum {

namespace {

void require_valid(const DenseMatrix& m) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw DomainError("matrix must be square with dim >= 1");
  }
  if (!m.allFinite()) {
    throw DomainError("matrix entries must be finite");
  }
}

double argument_0_2pi(Complex z) {
  if (z == Complex{}) return 0.0;
  double a = std::arg(z);
  if (a < 0.0) a += 2.0 * std::numbers::pi;
  if (a >= 2.0 * std::numbers::pi) a = 0.0;
  return a;
}

}  // namespace

ComplexMatrix::ComplexMatrix(DenseMatrix m) : m_(std::move(m)) { require_valid(m_); }

ComplexMatrix::ComplexMatrix(std::size_t dim, std::span<const Complex> entries) {
  if (dim == 0) throw DomainError("matrix dim must be >= 1");
  if (entries.size() != dim * dim) {
    throw DomainError("matrix entry count " + std::to_string(entries.size()) +
                      " does not equal dim^2 = " + std::to_string(dim * dim));
  }
  const auto n = static_cast<Eigen::Index>(dim);
  m_.resize(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      m_(r, c) = entries[static_cast<std::size_t>(r * n + c)];
    }
  }
  require_valid(m_);
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return ComplexMatrix(DenseMatrix::Identity(n, n));
}

ComplexMatrix ComplexMatrix::zero(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return ComplexMatrix(DenseMatrix::Zero(n, n));
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
  const auto n = static_cast<Eigen::Index>(diag.size());
  DenseMatrix m = DenseMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = diag[static_cast<std::size_t>(i)];
  return ComplexMatrix(std::move(m));
}

std::vector<Complex> ComplexMatrix::entries() const {
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(m_.size()));
  for (Eigen::Index r = 0; r < m_.rows(); ++r) {
    for (Eigen::Index c = 0; c < m_.cols(); ++c) out.push_back(m_(r, c));
  }
  return out;
}

ComplexMatrix ComplexMatrix::adjoint() const { return ComplexMatrix(DenseMatrix(m_.adjoint())); }

bool ComplexMatrix::is_hermitian(double tol) const {
  const double scale = std::max(1.0, m_.norm());
  return (m_ - m_.adjoint()).norm() <= tol * scale;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw DomainError("dimension mismatch in matrix sum");
  return ComplexMatrix(DenseMatrix(a.m_ + b.m_));
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw DomainError("dimension mismatch in matrix difference");
  return ComplexMatrix(DenseMatrix(a.m_ - b.m_));
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw DomainError("dimension mismatch in matrix product");
  return ComplexMatrix(DenseMatrix(a.m_ * b.m_));
}

ComplexMatrix operator*(Complex z, const ComplexMatrix& a) { return ComplexMatrix(DenseMatrix(z * a.m_)); }

double frobenius_norm(const ComplexMatrix& m) { return m.dense().norm(); }

std::string fingerprint(const ComplexMatrix& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (word >> (8 * byte)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(m.dim());
  for (const Complex z : m.entries()) {
    mix(std::bit_cast<std::uint64_t>(z.real()));
    mix(std::bit_cast<std::uint64_t>(z.imag()));
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double rounded_modulus(Complex z) {
  const double m = std::abs(z);
  if (m == 0.0 || !std::isfinite(m)) return m;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.11e", m);
  return std::strtod(buf, nullptr);
}

bool canonical_before(Complex a, Complex b) noexcept {
  const double ma = rounded_modulus(a);
  const double mb = rounded_modulus(b);
  if (ma != mb) return ma > mb;
  const double aa = argument_0_2pi(a);
  const double ab = argument_0_2pi(b);
  if (aa != ab) return aa < ab;
  return a.real() > b.real();
}

EigenSequence::EigenSequence(std::vector<Complex> values, std::optional<std::size_t> logical_length)
    : values_(std::move(values)), logical_length_(logical_length.value_or(values_.size())) {
  if (logical_length_ < values_.size()) {
    throw DomainError("logical length shorter than the stored eigenvalues");
  }
  for (const Complex z : values_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw DomainError("eigenvalues must be finite");
    }
  }
  std::stable_sort(values_.begin(), values_.end(), canonical_before);
}

Complex EigenSequence::at(std::size_t n) const noexcept {
  if (n == 0 || n > values_.size()) return {};
  return values_[n - 1];
}

EigenSequence EigenSequence::scaled(Complex alpha) const {
  std::vector<Complex> v(values_.begin(), values_.end());
  for (Complex& z : v) z *= alpha;
  return EigenSequence(std::move(v), logical_length_);
}

ScalarSequence ScalarSequence::finite(std::vector<double> values) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k]) || values[k] < 0.0) {
      throw DomainError("sequence entry " + std::to_string(k + 1) + " is negative or not finite");
    }
    if (k > 0 && values[k] > values[k - 1]) {
      throw DomainError("sequence is not nonincreasing at index " + std::to_string(k + 1));
    }
  }
  return ScalarSequence(FiniteValues{std::move(values)});
}

ScalarSequence ScalarSequence::power(double c, double a) {
  if (!(c > 0.0) || !(a > 0.0) || !std::isfinite(c) || !std::isfinite(a)) {
    throw DomainError("power law needs c > 0 and a > 0");
  }
  return ScalarSequence(PowerLaw{c, a});
}

ScalarSequence ScalarSequence::geometric(double c, double q) {
  if (!(c > 0.0) || !(q > 0.0 && q < 1.0) || !std::isfinite(c)) {
    throw DomainError("geometric law needs c > 0 and 0 < q < 1");
  }
  return ScalarSequence(GeometricLaw{c, q});
}

std::span<const double> ScalarSequence::finite_values() const noexcept {
  if (const auto* f = std::get_if<FiniteValues>(&law_)) return f->values;
  return {};
}

double ScalarSequence::value(std::size_t n) const {
  if (n == 0) throw DomainError("sequence index must be >= 1");
  return std::visit(
      [n](const auto& law) -> double {
        using T = std::decay_t<decltype(law)>;
        if constexpr (std::is_same_v<T, FiniteValues>) {
          return n <= law.values.size() ? law.values[n - 1] : 0.0;
        } else if constexpr (std::is_same_v<T, PowerLaw>) {
          return law.c * std::pow(static_cast<double>(n), -law.a);
        } else {
          return law.c * std::pow(law.q, static_cast<double>(n));
        }
      },
      law_);
}

std::vector<double> ScalarSequence::prefix(std::size_t count) const {
  std::vector<double> out(count);
  for (std::size_t n = 1; n <= count; ++n) out[n - 1] = value(n);
  return out;
}

double frac_index(const ScalarSequence& s, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("fractional index needs r > 0");
  const double fl = std::floor(r);
  const double idx = (fl == r) ? r : fl + 1.0;
  if (const auto* f = std::get_if<FiniteValues>(&s.law())) {
    if (idx > static_cast<double>(f->values.size())) return 0.0;
  }
  return s.value(static_cast<std::size_t>(idx));
}

EigenSequence eigenvalue_sequence(const ComplexMatrix& m) {
  Eigen::ComplexEigenSolver<DenseMatrix> solver(m.dense(), /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigensolver did not converge for matrix " + fingerprint(m));
  }
  const auto& ev = solver.eigenvalues();
  std::vector<Complex> values(ev.data(), ev.data() + ev.size());
  return EigenSequence(std::move(values), m.dim());
}

ScalarSequence singular_sequence(const ComplexMatrix& m) {
  Eigen::JacobiSVD<DenseMatrix> svd(m.dense());
  if (svd.info() != Eigen::Success) {
    throw NumericalError("singular value decomposition failed for matrix " + fingerprint(m));
  }
  const auto& sv = svd.singularValues();
  std::vector<double> values(sv.data(), sv.data() + sv.size());
  std::sort(values.begin(), values.end(), std::greater<>());
  return ScalarSequence::finite(std::move(values));
}

HermitianSplit hermitian_split(const ComplexMatrix& t) {
  const DenseMatrix& a = t.dense();
  DenseMatrix h = 0.5 * (a + a.adjoint());
  DenseMatrix k = (a - a.adjoint()) / Complex(0.0, 2.0);
  // Exact symmetry: average away the rounding asymmetry.
  h = 0.5 * (h + h.adjoint()).eval();
  k = 0.5 * (k + k.adjoint()).eval();
  return {ComplexMatrix(std::move(h)), ComplexMatrix(std::move(k))};
}

ComplexMatrix pencil(const ComplexMatrix& t, Complex z) {
  return ComplexMatrix(DenseMatrix(0.5 * (t.dense() + z * t.dense().adjoint())));
}

ComplexMatrix abs_operator(const ComplexMatrix& t) {
  DenseMatrix gram = t.dense().adjoint() * t.dense();
  gram = 0.5 * (gram + gram.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(gram);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("hermitian eigensolver failed for matrix " + fingerprint(t));
  }
  Eigen::VectorXd root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const DenseMatrix& v = solver.eigenvectors();
  DenseMatrix out = v * root.cast<Complex>().asDiagonal() * v.adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return ComplexMatrix(std::move(out));
}

ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b) {
  const auto na = static_cast<Eigen::Index>(a.dim());
  const auto nb = static_cast<Eigen::Index>(b.dim());
  DenseMatrix out = DenseMatrix::Zero(na + nb, na + nb);
  out.topLeftCorner(na, na) = a.dense();
  out.bottomRightCorner(nb, nb) = b.dense();
  return ComplexMatrix(std::move(out));
}

}  // namespace commsum
