#pragma once

// Scalar inequalities behind the blow-up argument, with randomized and grid
// checks:
//   h(x)   = 2|x|^p / (1 - sign(x)|x|^(p-1)),  x < 1
//   gap    = sum_j l_j h(x_j) - h(sum_j l_j x_j)   (Jensen-type, >= 0)
//   phi(l) = l^(p+1)/(p+1) - l + 1 - 1/(p+1)       (>= 0 on [0, 1], zero at 1)

#include "dwave/scalar.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dwave {

template <typename Scalar>
Scalar h(const Scalar& x, double p) {
  if (!(p > 1.0)) throw std::domain_error("h needs p > 1");
  if (!(x < Scalar(1))) throw std::domain_error("h is defined for x < 1 only");
  return Scalar(2) * abs_pow(x, p) / (Scalar(1) - signed_pow(x, p - 1.0));
}

template <typename Scalar>
Scalar phi(const Scalar& lambda, double p) {
  if (lambda < Scalar(0) || lambda > Scalar(1)) throw std::domain_error("phi is defined on [0, 1]");
  // Grouped so that lambda = 1 gives exactly zero in floating point too.
  const Scalar q = from_double<Scalar>(p) + Scalar(1);
  return (ScalarTraits<Scalar>::pow(lambda, p + 1.0) - Scalar(1)) / q + (Scalar(1) - lambda);
}

/// Weights l_j >= 0 summing to one over ordered points x_0 <= ... <= x_s < 1
/// with x_0 >= 0 and a non-negative mean.
template <typename Scalar>
class ConvexComboInstance {
 public:
  ConvexComboInstance(double p, std::vector<Scalar> xs, std::vector<Scalar> lambdas)
      : p_(p), xs_(std::move(xs)), lambdas_(std::move(lambdas)) {
    if (!(p_ > 1.0)) throw std::invalid_argument("p must exceed 1");
    if (xs_.empty() || xs_.size() != lambdas_.size())
      throw std::invalid_argument("need one weight per point and at least one point");
    if (xs_[0] < Scalar(0)) throw std::invalid_argument("x_0 must be non-negative");
    Scalar total(0);
    for (std::size_t j = 0; j < xs_.size(); ++j) {
      if (!(xs_[j] < Scalar(1))) throw std::invalid_argument("every x_j must be below 1");
      if (j > 0 && xs_[j] < xs_[j - 1]) throw std::invalid_argument("points must be non-decreasing");
      if (lambdas_[j] < Scalar(0)) throw std::invalid_argument("weights must be non-negative");
      total += lambdas_[j];
    }
    if constexpr (is_exact_v<Scalar>) {
      if (total != Scalar(1)) throw std::invalid_argument("weights must sum to 1");
    } else {
      if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("weights must sum to 1");
    }
    if (mean() < Scalar(0)) throw std::invalid_argument("weighted mean must be non-negative");
  }

  double p() const { return p_; }
  const std::vector<Scalar>& xs() const { return xs_; }
  const std::vector<Scalar>& lambdas() const { return lambdas_; }

  Scalar mean() const {
    Scalar m(0);
    for (std::size_t j = 0; j < xs_.size(); ++j) m += lambdas_[j] * xs_[j];
    return m;
  }

 private:
  double p_;
  std::vector<Scalar> xs_;
  std::vector<Scalar> lambdas_;
};

template <typename Scalar>
Scalar jensen_gap(const ConvexComboInstance<Scalar>& inst) {
  Scalar weighted(0);
  for (std::size_t j = 0; j < inst.xs().size(); ++j) weighted += inst.lambdas()[j] * h(inst.xs()[j], inst.p());
  return weighted - h(inst.mean(), inst.p());
}

/// min over x = 0, s, 2s, ... with x + s < 1 of h(x - s) - 2h(x) + h(x + s).
template <typename Scalar>
Scalar convexity_scan(double p, const Scalar& grid_step) {
  if (!(grid_step > Scalar(0)) || !(grid_step < Scalar(1))) throw std::invalid_argument("grid step must lie in (0, 1)");
  std::optional<Scalar> best;
  for (long i = 0;; ++i) {
    const Scalar x = grid_step * Scalar(i);
    const Scalar right = x + grid_step;
    if (!(right < Scalar(1))) break;
    const Scalar d2 = h(Scalar(x - grid_step), p) - Scalar(2) * h(x, p) + h(right, p);
    if (!best || d2 < *best) best = d2;
  }
  return best.value_or(Scalar(0));
}

/// JSON-ready summary of one randomized or grid suite.
struct SuiteSummary {
  std::string suite;
  long cases = 0;
  double min_gap = 0.0;
  std::string worst_instance;  // compact JSON
  long discarded = 0;          // rejected draws (randomized suites)
  long lambda0_zero = 0;       // accepted instances with l_0 == 0
};

/// `cases` valid random instances: s <= max_s, p in (1, 3], points drawn in
/// (-0.99, 0.99) and sorted, exponential weights normalised to one; draws that
/// violate the hypotheses are rejected.
SuiteSummary jensen_suite(std::uint64_t seed, long cases, int max_s = 8);

/// Min second difference of h on the grid of step `grid_step`, for each p.
SuiteSummary convexity_suite(const std::vector<double>& ps, double grid_step);

/// Min of phi on a grid over [0, 1) plus phi(1), for each p. min_gap is the
/// smallest value seen strictly below 1.
SuiteSummary phi_suite(const std::vector<double>& ps, double grid_step);

/// h increasing along the grid over [0, 1); min_gap is the smallest forward difference.
SuiteSummary monotonicity_suite(const std::vector<double>& ps, double grid_step);

std::string suite_json(const SuiteSummary& s);

}  // namespace dwave
