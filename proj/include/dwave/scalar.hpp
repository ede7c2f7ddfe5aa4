#pragma once

// Scalar support for the two arithmetic modes: IEEE double for simulation and
// exact GMP rationals for oracles. Everything templated on `Scalar` in this
// library goes through the helpers below, so adding a scalar type means
// specialising ScalarTraits and nothing else.

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace dwave {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

template <typename Scalar>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static double from_double(double x) { return x; }
  static double to_double(double x) { return x; }
  static bool is_finite(double x) { return std::isfinite(x); }
  // Small integer exponents dominate the hot loops; multiply them out.
  static double pow(double base, double exponent) {
    if (exponent >= 0.0 && exponent <= 8.0 && exponent == std::floor(exponent)) {
      double r = 1.0;
      for (int k = static_cast<int>(exponent); k > 0; --k) r *= base;
      return r;
    }
    return std::pow(base, exponent);
  }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  // Every finite double is a dyadic rational, so this conversion is exact.
  static Rational from_double(double x) {
    if (!std::isfinite(x)) throw std::domain_error("non-finite value has no rational form");
    return Rational(x);
  }
  static double to_double(const Rational& x) { return x.convert_to<double>(); }
  static bool is_finite(const Rational&) { return true; }
  static Rational pow(const Rational& base, double exponent) {
    if (exponent < 0 || exponent != std::floor(exponent))
      throw std::domain_error("exact arithmetic needs a non-negative integer exponent, got " +
                              std::to_string(exponent));
    auto e = static_cast<unsigned long>(exponent);
    Rational result{1};
    Rational b = base;
    while (e != 0) {
      if (e & 1U) result *= b;
      e >>= 1U;
      if (e != 0) b *= b;
    }
    return result;
  }
};

template <typename Scalar>
inline constexpr bool is_exact_v = ScalarTraits<Scalar>::exact;

template <typename Scalar>
Scalar from_double(double x) {
  return ScalarTraits<Scalar>::from_double(x);
}

template <typename Scalar>
double to_double(const Scalar& x) {
  return ScalarTraits<Scalar>::to_double(x);
}

template <typename Scalar>
bool is_finite(const Scalar& x) {
  return ScalarTraits<Scalar>::is_finite(x);
}

template <typename Scalar>
Scalar abs_value(const Scalar& x) {
  return x < Scalar(0) ? Scalar(-x) : x;
}

/// |x|^e
template <typename Scalar>
Scalar abs_pow(const Scalar& x, double exponent) {
  return ScalarTraits<Scalar>::pow(abs_value(x), exponent);
}

/// sign(x)·|x|^e, which is x·|x|^(e-1) written so that x = 0 is defined for e in (0, 1).
template <typename Scalar>
Scalar signed_pow(const Scalar& x, double exponent) {
  if (x == Scalar(0)) return Scalar(0);
  Scalar m = abs_pow(x, exponent);
  return x < Scalar(0) ? Scalar(-m) : m;
}

/// Running sum. Doubles use Neumaier compensation: lattice sums run over
/// millions of points and the second difference of U cancels most digits.
template <typename Scalar>
class Accumulator {
 public:
  void add(const Scalar& x) {
    if constexpr (is_exact_v<Scalar>) {
      sum_ += x;
    } else {
      const double t = sum_ + x;
      comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
      sum_ = t;
    }
  }
  Scalar value() const {
    if constexpr (is_exact_v<Scalar>) {
      return sum_;
    } else {
      return sum_ + comp_;
    }
  }

 private:
  Scalar sum_{0};
  Scalar comp_{0};
};

/// True when `p` can be used as an exponent in exact arithmetic.
inline bool is_integral_exponent(double p) { return std::isfinite(p) && p == std::floor(p); }

}  // namespace dwave
