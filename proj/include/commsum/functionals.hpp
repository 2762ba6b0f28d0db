#pragma once

#include <complex>
#include <cstddef>
#include <functional>

#include "commsum/cutoffs.hpp"
#include "commsum/spectral.hpp"

namespace commsum {

/// Number of eigenvalues with |lambda| >= 1.
std::size_t nu(const EigenSequence& lambda);

/// Sum of log_+ |lambda_n|.
double mu(const EigenSequence& lambda);

/// Sum of the eigenvalues with |lambda| >= 1.
Complex chi(const EigenSequence& lambda);

/// Sum of lambda_n * phi(log|lambda_n|); zero eigenvalues contribute nothing.
Complex chi_phi(const EigenSequence& lambda, const CutoffPair& pair);

/// Counting and log-mass functionals of a nonnegative real sequence viewed as
/// the eigenvalues of a positive diagonal operator.
std::size_t nu(const ScalarSequence& s);
double mu(const ScalarSequence& s);

/// A real function on the plane that vanishes on |z| <= radius.
struct VanishingFunction {
  std::function<double(Complex)> f;
  double radius = 0.0;
};

VanishingFunction g_function(const CutoffPair& pair);
VanishingFunction h_function(const CutoffPair& pair);

/// Sum of f(lambda_n) over eigenvalues with |lambda_n| > radius.
/// Throws DomainError if the radius is not declared positive.
double f_hat(const EigenSequence& lambda, const VanishingFunction& f);

/// Rectangle-rule mean of f_hat(S + e^{i theta} T) over theta_k = 2 pi k / nodes.
/// Node values are summed in index order whatever the thread count.
/// Throws DomainError for nodes < 8.
double circle_mean(const ComplexMatrix& s, const ComplexMatrix& t, const VanishingFunction& f,
                   std::size_t nodes = 512);

struct FunctionalReport {
  std::size_t nu = 0;
  double mu = 0.0;
  Complex chi{};
  Complex chi_phi{};
};

/// Builds the report and checks |chi - chi_phi| <= e nu (NumericalError if not).
FunctionalReport functional_report(const EigenSequence& lambda, const CutoffPair& pair);

/// 4 C1 + 52 / ln 2.
double commutator_constant(double c1);

}  // namespace commsum
