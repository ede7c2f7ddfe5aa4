#pragma once

// Sequential drivers for the lattice schemes. Each step reads only the two
// previous slices; records and snapshots are produced on the calling thread.

#include "dwave/diagnostics.hpp"
#include "dwave/lattice.hpp"
#include "dwave/scheme.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace dwave {

struct RunOptions {
  long max_steps = 100000;
  long record_every = 1;
  std::optional<Coord> K;  // support bound for T^tau; defaults to the data's support radius (at least 1)
  long snapshot_every = 0;  // 0 disables snapshots
};

struct BudgetExhausted {
  long final_tau = 0;
};

using RunStatus = std::variant<BlowUpReport, BudgetExhausted, NumericOverflow>;

struct Snapshot {
  long tau = 0;
  Field<double> u{1};
};

struct RunOutcome {
  RunStatus status;
  std::vector<DiagnosticsRecord> trajectory;
  std::vector<Snapshot> snapshots;
  Coord K = 1;

  bool blew_up() const { return std::holds_alternative<BlowUpReport>(status); }
  const BlowUpReport* blowup() const { return std::get_if<BlowUpReport>(&status); }
  std::string status_name() const;
};

template <typename Scalar>
Coord default_support_bound(const Field<Scalar>& u0, const Field<Scalar>& u1) {
  return std::max<Coord>({Coord{1}, support_radius(u0), support_radius(u1)});
}

namespace detail {

template <typename Scalar>
bool due(long tau, const RunOptions& opt) {
  return opt.record_every <= 1 || (tau - 1) % opt.record_every == 0;
}

template <typename Scalar>
void maybe_snapshot(std::vector<Snapshot>& out, long tau, const Field<Scalar>& u, const RunOptions& opt) {
  if (opt.snapshot_every > 0 && tau % opt.snapshot_every == 0) out.push_back({tau, field_cast<double>(u)});
}

}  // namespace detail

/// Iterate the proposed scheme from (u0, u1) until v reaches threshold or
/// max_steps steps have been taken. Record tau describes the pair
/// (u^{tau-1}, u^tau) and v^tau = M(u^tau).
template <typename Scalar>
RunOutcome run_simulation(const Field<Scalar>& u0, const Field<Scalar>& u1, const SchemeParams& params,
                          const RunOptions& options = {}) {
  if (u0.dim() != params.d || u1.dim() != params.d)
    throw std::invalid_argument("initial data dimension does not match scheme dimension");
  if (options.max_steps < 0) throw std::invalid_argument("max_steps must be non-negative");
  const ProposedKernel<Scalar> kernel(params);

  RunOutcome out;
  out.K = options.K.value_or(default_support_bound(u0, u1));
  Field<Scalar> u_prev = u0;
  Field<Scalar> u_curr = u1;
  Scalar U_prev = field_sum(u_prev);
  Scalar U_curr = field_sum(u_curr);
  Coord curr_radius = support_radius(u_curr);
  detail::maybe_snapshot(out.snapshots, 0, u0, options);
  detail::maybe_snapshot(out.snapshots, 1, u1, options);

  for (long tau = 1;; ++tau) {
    if (tau > options.max_steps) {
      out.status = BudgetExhausted{tau};
      return out;
    }
    auto v = neighbor_average(u_curr);
    const auto& layout = v.layout();
    const auto& vals = v.values();

    DiagnosticsRecord rec;
    rec.tau = tau;
    rec.U = to_double(U_curr);
    rec.T = l1_ball_count(params.d, out.K + tau);
    rec.radius = curr_radius;

    // One pass over v: extremes, detection, gain sum and support.
    Scalar vmax = vals[0], vmin = vals[0];
    Accumulator<Scalar> gain_acc;
    std::optional<Eigen::Index> hit;
    Coord v_radius = 0;
    bool any_zero = false;
    for (std::size_t r = 0; r < layout.row_count(); ++r) {
      const auto& row = layout.row(r);
      const Coord base = layout.prefix_norm(r);
      for (Coord m = -row.half_width; m <= row.half_width; ++m) {
        const auto i = static_cast<Eigen::Index>(row.offset + static_cast<std::size_t>(m + row.half_width));
        const Scalar& x = vals[i];
        if (x == Scalar(0)) {
          any_zero = true;
          continue;
        }
        v_radius = std::max(v_radius, base + (m < 0 ? -m : m));
        if (x > vmax) vmax = x;
        if (x < vmin) vmin = x;
        if (!hit) {
          const Scalar den = kernel.denominator(x);
          if (kernel.reaches_threshold(x, den)) {
            hit = i;
          } else {
            Scalar gx = kernel.gain(x, den);
            if (gx < Scalar(0)) ++rec.negative_gain_points;
            gain_acc.add(gx);
          }
        }
      }
    }
    if (any_zero && vmax < Scalar(0)) vmax = Scalar(0);
    if (any_zero && vmin > Scalar(0)) vmin = Scalar(0);
    rec.maxv = to_double(vmax);
    rec.minv = to_double(vmin);
    rec.v_radius = v_radius;

    if (hit) {
      rec.gain_sum = 0.0;
      out.trajectory.push_back(rec);
      out.status = BlowUpReport{tau, layout.point_at(static_cast<std::size_t>(*hit)), to_double(vals[*hit])};
      return out;
    }
    const Scalar gains = gain_acc.value();
    rec.gain_sum = to_double(gains);

    // u^{tau+1} = sum_next_prev(v) - u^{tau-1} overwrites v's storage. v lives
    // on radius R + 1 and u_prev normally on R - 1; u_prev's rows are found
    // with a forward cursor since both layouts are in lexicographic order.
    const Coord radius = std::max(v.declared_radius(), u_prev.declared_radius());
    auto target = v.declared_radius() == radius ? std::move(v) : resized(v, radius);
    const auto target_layout = target.shared_layout();
    auto next = std::move(target).take_values();
    const auto& nl = *target_layout;
    const auto& pl = u_prev.layout();
    const auto& pv = u_prev.values();
    std::size_t pc = 0;
    Accumulator<Scalar> next_acc;
    Coord next_radius = 0;
    for (std::size_t r = 0; r < nl.row_count(); ++r) {
      const auto& row = nl.row(r);
      const Coord base = nl.prefix_norm(r);
      const auto prefix = nl.prefix(r);
      auto before = [&](std::size_t c) {
        const auto q = pl.prefix(c);
        return std::lexicographical_compare(q.begin(), q.end(), prefix.begin(), prefix.end());
      };
      while (pc < pl.row_count() && before(pc)) ++pc;
      const bool has_prev = pc < pl.row_count() && std::equal(prefix.begin(), prefix.end(), pl.prefix(pc).begin());
      const Coord pw = has_prev ? pl.row(pc).half_width : -1;
      for (Coord m = -row.half_width; m <= row.half_width; ++m) {
        const auto i = static_cast<Eigen::Index>(row.offset + static_cast<std::size_t>(m + row.half_width));
        Scalar& x = next[i];
        const Scalar pm = (m >= -pw && m <= pw)
                              ? pv[static_cast<Eigen::Index>(pl.row(pc).offset + static_cast<std::size_t>(m + pw))]
                              : Scalar(0);
        x = (x == Scalar(0) ? Scalar(0) : kernel.sum_next_prev(x)) - pm;
        if (!is_finite(x)) {
          out.trajectory.push_back(rec);
          out.status = NumericOverflow{tau, nl.point_at(static_cast<std::size_t>(i))};
          return out;
        }
        if (x != Scalar(0)) next_radius = std::max(next_radius, base + (m < 0 ? -m : m));
        next_acc.add(x);
      }
    }

    Scalar U_next = next_acc.value();
    const Scalar d2 = U_next - Scalar(2) * U_curr + U_prev;
    rec.d2U = to_double(d2);
    rec.U_next = to_double(U_next);
    rec.identity_residual = to_double(abs_value(Scalar(d2 - gains)));
    if (detail::due<Scalar>(tau, options)) out.trajectory.push_back(rec);

    u_prev = std::move(u_curr);
    u_curr = Field<Scalar>(target_layout, std::move(next));
    U_prev = std::move(U_curr);
    U_curr = std::move(U_next);
    curr_radius = next_radius;
    detail::maybe_snapshot(out.snapshots, tau + 1, u_curr, options);
  }
}

/// Iterate the naive scheme for max_steps steps. There is no threshold event;
/// the run ends with BudgetExhausted or NumericOverflow.
template <typename Scalar>
RunOutcome run_naive(const Field<Scalar>& u0, const Field<Scalar>& u1, const SchemeParams& params,
                     const RunOptions& options = {}) {
  if (u0.dim() != params.d || u1.dim() != params.d)
    throw std::invalid_argument("initial data dimension does not match scheme dimension");
  RunOutcome out;
  out.K = options.K.value_or(default_support_bound(u0, u1));
  Field<Scalar> u_prev = u0;
  Field<Scalar> u_curr = u1;
  detail::maybe_snapshot(out.snapshots, 0, u0, options);
  detail::maybe_snapshot(out.snapshots, 1, u1, options);
  for (long tau = 1;; ++tau) {
    if (tau > options.max_steps) {
      out.status = BudgetExhausted{tau};
      return out;
    }
    DiagnosticsRecord rec;
    rec.tau = tau;
    rec.U = to_double(field_sum(u_curr));
    rec.T = l1_ball_count(params.d, out.K + tau);
    rec.radius = support_radius(u_curr);
    const auto v = neighbor_average(u_curr);
    rec.maxv = to_double(field_max(v).value);
    rec.minv = to_double(field_min(v).value);
    rec.v_radius = support_radius(v);

    auto stepped = step_naive(u_prev, u_curr, params, tau);
    if (auto* overflow = std::get_if<NumericOverflow>(&stepped)) {
      out.trajectory.push_back(rec);
      out.status = *overflow;
      return out;
    }
    auto& next = std::get<Field<Scalar>>(stepped);
    const Scalar U_next = field_sum(next);
    rec.U_next = to_double(U_next);
    rec.d2U = to_double(Scalar(U_next - Scalar(2) * field_sum(u_curr) + field_sum(u_prev)));
    if (detail::due<Scalar>(tau, options)) out.trajectory.push_back(rec);
    u_prev = std::move(u_curr);
    u_curr = std::move(next);
    detail::maybe_snapshot(out.snapshots, tau + 1, u_curr, options);
  }
}

}  // namespace dwave
