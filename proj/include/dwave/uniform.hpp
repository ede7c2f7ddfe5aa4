#pragma once

// Spatially uniform data u^0 = 0, u^1 = g reduces the lattice schemes to scalar
// recurrences; the continuous counterpart is u'' = |u|^p, u(0) = 0, u'(0) = g.

#include "dwave/scalar.hpp"
#include "dwave/scheme.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

namespace dwave {

template <typename Scalar>
struct UniformTrajectory {
  Scalar g;
  double p = 2.0;
  double delta = 1.0;
  std::vector<Scalar> values;  // u^0, u^1, ...
  std::optional<long> blowup_step;
  bool overflow = false;

  double threshold() const { return SchemeParams::physical(1, p, delta).threshold(); }
};

/// u^{tau+1} = 4u/(2 - delta^2 sign(u)|u|^(p-1)) - u^{tau-1} from (0, g), stopping at
/// the first u^tau >= (2/delta^2)^(1/(p-1)) or after max_steps values past u^0.
template <typename Scalar>
UniformTrajectory<Scalar> iterate_uniform(const Scalar& g, double p, double delta, long max_steps) {
  if (!(g > Scalar(0))) throw std::invalid_argument("g must be positive");
  const ProposedKernel<Scalar> kernel(SchemeParams::physical(1, p, delta));
  UniformTrajectory<Scalar> traj{g, p, delta, {Scalar(0), g}, std::nullopt, false};
  if (kernel.reaches_threshold(g)) {
    traj.blowup_step = 1;
    return traj;
  }
  for (long tau = 1; tau < max_steps; ++tau) {
    const Scalar& u = traj.values[static_cast<std::size_t>(tau)];
    Scalar next = kernel.sum_next_prev(u) - traj.values[static_cast<std::size_t>(tau - 1)];
    if (!is_finite(next)) {
      traj.overflow = true;
      return traj;
    }
    traj.values.push_back(std::move(next));
    if (kernel.reaches_threshold(traj.values.back())) {
      traj.blowup_step = tau + 1;
      return traj;
    }
  }
  return traj;
}

/// u^tau > g*tau for 2 <= tau < blowup_step (every recorded tau >= 2 when no blow-up).
/// tau = 1 is excluded: there u^1 = g*1 by construction.
template <typename Scalar>
std::optional<long> first_linear_bound_violation(const UniformTrajectory<Scalar>& traj) {
  const auto n = static_cast<long>(traj.values.size());
  const long end = traj.blowup_step ? std::min(*traj.blowup_step, n) : n;
  for (long tau = 2; tau < end; ++tau)
    if (!(traj.values[static_cast<std::size_t>(tau)] > traj.g * Scalar(tau))) return tau;
  return std::nullopt;
}

template <typename Scalar>
bool linear_lower_bound_check(const UniformTrajectory<Scalar>& traj) {
  return !first_linear_bound_violation(traj).has_value();
}

/// u^{tau+1} - 2u^tau + u^{tau-1} over the pre-threshold part of the run.
template <typename Scalar>
std::vector<Scalar> second_differences(const UniformTrajectory<Scalar>& traj) {
  std::vector<Scalar> out;
  const auto n = traj.values.size();
  const std::size_t end = traj.blowup_step ? static_cast<std::size_t>(*traj.blowup_step) : n - 1;
  for (std::size_t tau = 1; tau < end && tau + 1 < n; ++tau)
    out.push_back(traj.values[tau + 1] - Scalar(2) * traj.values[tau] + traj.values[tau - 1]);
  return out;
}

template <typename Scalar>
struct NaiveUniformRun {
  long steps_completed = 0;  // number of values computed past u^1
  std::vector<double> approx;  // u^0, u^1, ... rounded to double
  std::size_t max_bits = 0;    // largest numerator + denominator size seen (exact mode)
  bool overflow = false;
  bool bit_budget_hit = false;
  Scalar last{};
};

/// u^{tau+1} = 2u^tau - u^{tau-1} + delta^2 |u^tau|^p from (0, g). In exact
/// arithmetic the iterate size roughly doubles per step once |u| is large, so
/// `bit_budget` (0 = unlimited) stops the run before memory is exhausted.
template <typename Scalar>
NaiveUniformRun<Scalar> iterate_naive_uniform(const Scalar& g, double p, double delta, long steps,
                                              std::size_t bit_budget = 0) {
  SchemeParams{1, p, delta, std::nullopt, false}.validate();
  if constexpr (is_exact_v<Scalar>) {
    if (!is_integral_exponent(p)) throw std::domain_error("exact arithmetic needs an integer exponent p");
  }
  const Scalar delta_s = from_double<Scalar>(delta);
  const Scalar delta_sq = delta_s * delta_s;
  NaiveUniformRun<Scalar> run;
  Scalar prev(0);
  Scalar curr = g;
  run.approx = {0.0, to_double(g)};
  for (long k = 0; k < steps; ++k) {
    Scalar next = Scalar(2) * curr - prev + delta_sq * abs_pow(curr, p);
    if (!is_finite(next)) {
      run.overflow = true;
      break;
    }
    prev = std::move(curr);
    curr = std::move(next);
    ++run.steps_completed;
    run.approx.push_back(to_double(curr));
    if constexpr (is_exact_v<Scalar>) {
      const auto num = boost::multiprecision::numerator(curr);
      const auto den = boost::multiprecision::denominator(curr);
      const std::size_t bits = mpz_sizeinbase(num.backend().data(), 2) + mpz_sizeinbase(den.backend().data(), 2);
      run.max_bits = std::max(run.max_bits, bits);
      if (bit_budget != 0 && bits > bit_budget && k + 1 < steps) {
        run.bit_budget_hit = true;
        break;
      }
    }
  }
  run.last = curr;
  return run;
}

/// tau,u,threshold,gap with gap = threshold - u.
void write_uniform_csv(std::ostream& os, const UniformTrajectory<double>& traj);

struct ContinuousBoundParams {
  double alpha = 0.5;    // (p - 1) / 2
  double C = 0.0;        // sqrt(2 / (p + 1))
  double epsilon = 0.0;  // anchor time
  double u_eps = 0.0;    // u(epsilon) > 0

  static ContinuousBoundParams from_exponent(double p, double epsilon, double u_eps);
};

/// Lower bound for u'' = |u|^p anchored at (epsilon, u(epsilon)):
/// (alpha C)^(-1/alpha) / ((alpha C)^(-1) u_eps^(-alpha) + epsilon - t)^(1/alpha).
/// Valid for epsilon <= t < T*; the anchor itself returns u_eps.
double continuous_lower_bound(double t, const ContinuousBoundParams& params);

/// T* = u_eps^(-alpha) / (alpha C) + epsilon, where the lower bound diverges.
double continuous_blowup_upper_time(const ContinuousBoundParams& params);

}  // namespace dwave
