#pragma once

#include <cmath>
#include <complex>
#include <type_traits>

namespace commsum::detail {

// Neumaier compensated accumulator for double or complex<double>.
template <class T>
class CompensatedSum {
 public:
  void add(T x) {
    const T t = sum_ + x;
    if constexpr (std::is_same_v<T, double>) {
      comp_ += compensate(sum_, x, t);
    } else {
      comp_ += T(compensate(sum_.real(), x.real(), t.real()),
                 compensate(sum_.imag(), x.imag(), t.imag()));
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  static double compensate(double s, double x, double t) {
    return std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
  }
  T sum_{};
  T comp_{};
};

}  // namespace commsum::detail
