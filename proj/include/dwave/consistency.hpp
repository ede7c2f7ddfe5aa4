#pragma once

// Consistency of the proposed scheme with u_tt = Laplacian(u) + |u|^p.
//
// Sampling a smooth u on the grid t = tau*delta, x = xi*n with xi = sqrt(d)*delta,
// the scheme operator
//   S[u] = (u(t+delta) + u(t-delta) - 4v / (2 - delta^2 sign(v)|v|^(p-1))) / delta^2,
//   v    = (1/2d) sum_k (u(t, x + xi e_k) + u(t, x - xi e_k)),
// differs from P[u] = u_tt - Laplacian(u) - |u|^p by O(delta^2).

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dwave {

struct SmoothSampler {
  std::string name;
  int d = 1;
  std::function<double(double, std::span<const double>)> u;
  std::function<double(double, std::span<const double>)> u_tt;
  std::function<double(double, std::span<const double>)> laplacian;
};

struct SamplePoint {
  double t = 0.0;
  std::vector<double> x;
};

/// gaussian_trig, polynomial, linear_t and constant samplers in dimension d.
std::vector<SmoothSampler> sampler_catalog(int d);
SmoothSampler zero_sampler(int d);
std::vector<SamplePoint> default_sample_points(int d);

/// S[u] - P[u] at (t, x). Throws std::domain_error when the scheme denominator
/// is not positive at the sampled v.
double truncation_residual(const SmoothSampler& s, double t, std::span<const double> x, double delta, double p);

/// (u(t+delta) + u(t-delta) - v (2 + delta^2 sign(v)|v|^(p-1))) / delta^2 - P[u],
/// the unrationalised two-level form.
double scheme_form_residual(const SmoothSampler& s, double t, std::span<const double> x, double delta, double p);

struct ObservedOrder {
  std::vector<double> deltas;
  std::vector<double> max_residuals;
  std::optional<double> slope;  // empty when fewer than two residuals clear the noise floor
  bool exact = false;           // every residual below the noise floor
};

/// Least-squares slope of log(max |residual|) against log(delta). Needs at least
/// three deltas, each half the previous one.
ObservedOrder refinement_study(const SmoothSampler& s, std::span<const double> deltas,
                               const std::vector<SamplePoint>& points, double p);

/// Slope of a log-log fit, shared with the tests.
double loglog_slope(std::span<const double> xs, std::span<const double> ys);

}  // namespace dwave
