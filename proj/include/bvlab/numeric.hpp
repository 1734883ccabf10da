#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

namespace bvlab {

/// d^p for d >= 0, p > 0, via exp(p log d). Zero contributes zero; integer
/// exponents 1, 2 and 1/2 take correctly rounded fast paths.
inline double power(double d, double p) {
  if (d == 0.0) return 0.0;
  if (p == 1.0) return d;
  if (p == 2.0) return d * d;
  if (p == 0.5) return std::sqrt(d);
  if (std::isinf(d)) return d;
  return std::exp(p * std::log(d));
}

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  CompensatedSum() = default;
  explicit CompensatedSum(double init) : sum_(init) {}

  CompensatedSum& operator+=(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  double value() const { return sum_ + comp_; }
  explicit operator double() const { return value(); }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Number of representable doubles between a and b (both finite).
inline std::uint64_t ulp_distance(double a, double b) {
  auto ordered = [](double x) {
    const auto i = std::bit_cast<std::int64_t>(x);
    return i < 0 ? std::numeric_limits<std::int64_t>::min() - i : i;
  };
  const std::int64_t ia = ordered(a);
  const std::int64_t ib = ordered(b);
  return ia > ib ? static_cast<std::uint64_t>(ia - ib) : static_cast<std::uint64_t>(ib - ia);
}

/// |a - b| <= rel * max(|a|, |b|).
inline bool approx_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace bvlab
