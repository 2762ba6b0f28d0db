#pragma once
// Conditions 4 and 5 at a single alpha by explicit expansion of the witness.

#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

struct WitnessData {
  std::vector<double> base;
  double tail = 0.0;  // tau in tau / j
  std::size_t copies = 1;
  double scale = 1.0;
};

// Values of alpha * s_n that are > threshold: calls f(value) once per n.
template <typename F>
void for_each_large(const WitnessData& w, double alpha, double threshold, F f) {
  for (std::size_t j = 1; j <= w.base.size(); ++j) {
    const double v = alpha * w.scale * w.base[j - 1];
    if (v >= threshold)
      for (std::size_t c = 0; c < w.copies; ++c) f(v);
  }
  if (w.tail <= 0.0) return;
  for (std::size_t j = w.base.size() + 1;; ++j) {
    const double v = alpha * w.scale * w.tail / static_cast<double>(j);
    if (v < threshold) break;
    for (std::size_t c = 0; c < w.copies; ++c) f(v);
  }
}

inline double abs_chi(const std::vector<std::complex<double>>& lambda, double alpha) {
  std::complex<double> s = 0.0;
  for (auto z : lambda)
    if (std::abs(alpha * z) >= 1.0) s += alpha * z;
  return std::abs(s);
}

inline double nu_at(const WitnessData& w, double alpha) {
  double count = 0.0;
  for_each_large(w, alpha, 1.0, [&](double) { count += 1.0; });
  return count;
}

inline double mu_at(const WitnessData& w, double alpha) {
  double sum = 0.0;
  for_each_large(w, alpha, 1.0, [&](double v) { sum += std::log(v); });
  return sum;
}

}  // namespace oracle
