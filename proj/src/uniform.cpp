#include "dwave/uniform.hpp"
#include "dwave/format.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace dwave {

void write_uniform_csv(std::ostream& os, const UniformTrajectory<double>& traj) {
  const double threshold = traj.threshold();
  os << "tau,u,threshold,gap\n";
  for (std::size_t tau = 0; tau < traj.values.size(); ++tau) {
    const double u = traj.values[tau];
    os << tau << ',' << format_double(u) << ',' << format_double(threshold) << ','
       << format_double(threshold - u) << '\n';
  }
}

ContinuousBoundParams ContinuousBoundParams::from_exponent(double p, double epsilon, double u_eps) {
  if (!(p > 1.0)) throw std::invalid_argument("p must exceed 1");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be non-negative");
  if (!(u_eps > 0.0)) throw std::invalid_argument("u(epsilon) must be positive");
  return {(p - 1.0) / 2.0, std::sqrt(2.0 / (p + 1.0)), epsilon, u_eps};
}

double continuous_blowup_upper_time(const ContinuousBoundParams& params) {
  return std::pow(params.u_eps, -params.alpha) / (params.alpha * params.C) + params.epsilon;
}

double continuous_lower_bound(double t, const ContinuousBoundParams& params) {
  const double t_star = continuous_blowup_upper_time(params);
  if (!(t >= params.epsilon) || !(t < t_star))
    throw std::domain_error("t outside [epsilon, T*) for the continuous lower bound");
  const double ac = params.alpha * params.C;
  const double base = std::pow(params.u_eps, -params.alpha) / ac + params.epsilon - t;
  return std::pow(ac, -1.0 / params.alpha) / std::pow(base, 1.0 / params.alpha);
}

}  // namespace dwave
