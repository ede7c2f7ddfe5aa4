#pragma once

// Per-step quantities of a lattice run and monitors for the inequalities that
// drive the blow-up argument:
//   U^tau = sum_n u^tau_n,  T^tau = #{||n|| <= K + tau},
//   U^{tau+1} - 2U^tau + U^{tau-1} = sum_n gain(v^tau_n),
//   E^tau = (U^{tau+1} - U^tau)^2 - C2/(p+1) tau^-(p+1) (U^tau)^(p+1).

#include "dwave/lattice.hpp"
#include "dwave/scheme.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dwave {

struct DiagnosticsRecord {
  long tau = 0;
  double U = 0.0;
  std::uint64_t T = 0;
  double maxv = 0.0;
  double minv = 0.0;
  Coord radius = 0;              // support radius of u^tau
  std::optional<double> d2U;     // needs U^{tau+1}
  std::optional<double> E;       // needs U^{tau+1} and fitted constants

  // Not part of the CSV.
  Coord v_radius = 0;            // support radius of v^tau
  double gain_sum = 0.0;         // sum_n gain(v^tau_n)
  std::optional<double> U_next;  // U^{tau+1}
  std::optional<double> identity_residual;  // |d2U - gain_sum|, evaluated in the run's arithmetic
  long negative_gain_points = 0;
};

struct DiagnosticsConstants {
  double C_T = 0.0;       // max T / tau^d over the tail
  double C2 = 0.0;        // 2 C_T^(1-p)
  double C0 = 0.0;        // min U / tau
  double C1_prime = 0.0;  // min U / (tau log tau)
  double C3 = 0.0;        // min (U^{tau+1}-U^tau)^2 / (tau^-(p+1) U^(p+1))
  double C_prime = 0.0;   // min U / tau^(d+1)
  long onset_tau = 0;     // first tau of the tail window
  int d = 1;
  double p = 2.0;
};

/// Record for step tau of `state` (u^{tau-1}, u^tau). d2U and U_next come from
/// the proposed step unless it blows up; E stays empty.
template <typename Scalar>
DiagnosticsRecord record_step(const SimState<Scalar>& state, Coord K, const SchemeParams& params) {
  const ProposedKernel<Scalar> kernel(params);
  const auto v = neighbor_average(state.u_curr);
  DiagnosticsRecord rec;
  rec.tau = state.tau;
  const Scalar U = field_sum(state.u_curr);
  const Scalar U_prev = field_sum(state.u_prev);
  rec.U = to_double(U);
  rec.T = l1_ball_count(state.u_curr.dim(), K + state.tau);
  rec.maxv = to_double(field_max(v).value);
  rec.minv = to_double(field_min(v).value);
  rec.radius = support_radius(state.u_curr);
  rec.v_radius = support_radius(v);
  if (!detect_blowup(v, kernel)) {
    Accumulator<Scalar> sum, next_plus_prev;
    for (Eigen::Index i = 0; i < v.values().size(); ++i) {
      const Scalar& x = v.values()[i];
      if (x == Scalar(0)) continue;
      sum.add(kernel.gain(x));
      next_plus_prev.add(kernel.sum_next_prev(x));
    }
    const Scalar U_next = next_plus_prev.value() - U_prev;
    rec.gain_sum = to_double(sum.value());
    rec.U_next = to_double(U_next);
    rec.d2U = to_double(Scalar(U_next - Scalar(2) * U + U_prev));
  }
  return rec;
}

/// |U^{tau+1} - 2U^tau + U^{tau-1} - sum_n gain(v^tau_n)| for a non-blow-up step.
template <typename Scalar>
Scalar check_sum_identity(const Field<Scalar>& u_prev, const Field<Scalar>& u_curr,
                          const Field<Scalar>& u_next, const SchemeParams& params) {
  const ProposedKernel<Scalar> kernel(params);
  const auto v = neighbor_average(u_curr);
  if (detect_blowup(v, kernel)) throw std::invalid_argument("step reaches the blow-up threshold");
  Accumulator<Scalar> acc;
  for (Eigen::Index i = 0; i < v.values().size(); ++i) acc.add(kernel.gain(v.values()[i]));
  const Scalar gains = acc.value();
  const Scalar lhs = field_sum(u_next) - Scalar(2) * field_sum(u_curr) + field_sum(u_prev);
  return abs_value(Scalar(lhs - gains));
}

/// Fit the existential constants on the last `tail_fraction` of `records`.
DiagnosticsConstants fit_constants(const std::vector<DiagnosticsRecord>& records, int d, double p,
                                   double tail_fraction = 0.5);

/// Fill E on every record whose successor U^{tau+1} is known.
void attach_energy(std::vector<DiagnosticsRecord>& records, const DiagnosticsConstants& consts);

struct InequalityMonitor {
  std::string name;
  bool hard = false;                 // must hold at every step
  std::optional<long> onset_tau;     // first step where it holds
  bool holds_through_end = false;    // holds at every step from onset on
  std::optional<double> fitted_constant;
  long checked_steps = 0;
  long violations = 0;
};

struct MonitorReport {
  std::vector<InequalityMonitor> monitors;
  long lemma_hypothesis_failures = 0;  // steps with min v < 0
  long gain_sign_violations = 0;       // points with gain(v) < 0

  const InequalityMonitor& get(const std::string& name) const;
  bool hard_ok() const;
};

/// Evaluate every inequality on the pre-blow-up `records` (ordered by tau).
MonitorReport monitor_inequalities(const std::vector<DiagnosticsRecord>& records,
                                   const DiagnosticsConstants& consts);

/// tau,U,T,maxv,minv,radius,d2U,E
void write_trajectory_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& records);

std::string monitor_report_json(const MonitorReport& report, const DiagnosticsConstants& consts);

}  // namespace dwave
