#pragma once

// Time stepping on the lattice.
//
// Proposed scheme (physical variables):
//   u_next(n) + u_prev(n) = 4 v(n) / (2 - delta^2 * sign(v)|v|^(p-1)),   v = M(u_curr)
// and in scaled variables (threshold 1):
//   u_next(n) + u_prev(n) = 2 v(n) / (1 - sign(v)|v|^(p-1)).
// Naive central differences with lattice ratio lambda:
//   u_next = 2 d lambda M(u) + (2 - 2 d lambda) u - u_prev + delta^2 |u|^p.

#include "dwave/lattice.hpp"
#include "dwave/scalar.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace dwave {

struct SchemeParams {
  int d = 1;
  double p = 2.0;
  double delta = 1.0;
  std::optional<double> lambda;  // naive scheme only; unset means 1/d
  bool scaled = false;

  static SchemeParams physical(int d, double p, double delta) { return {d, p, delta, std::nullopt, false}; }
  static SchemeParams scaled_form(int d, double p, double delta) { return {d, p, delta, std::nullopt, true}; }

  void validate() const;

  /// (2 / delta^2)^(1/(p-1)), the factor between physical and scaled values.
  double scale_factor() const { return std::pow(2.0 / (delta * delta), 1.0 / (p - 1.0)); }
  double threshold() const { return scaled ? 1.0 : scale_factor(); }
  double lattice_ratio() const { return lambda.value_or(1.0 / d); }
};

inline void SchemeParams::validate() const {
  if (d < 1) throw std::invalid_argument("d must be at least 1");
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must exceed 1");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("delta must be positive");
  if (lambda && !(*lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
}

/// (d+1)/(d-1); +infinity for d = 1, where any p > 1 is admissible.
inline double kato_exponent(int d) {
  if (d < 1) throw std::invalid_argument("d must be at least 1");
  if (d == 1) return std::numeric_limits<double>::infinity();
  return static_cast<double>(d + 1) / static_cast<double>(d - 1);
}

/// Strauss-type critical exponent (d + 1 + sqrt(d^2 + 10 d - 7)) / (2 (d - 1)), d >= 2.
inline double critical_exponent(int d) {
  if (d < 2) throw std::domain_error("critical exponent needs d >= 2");
  const double dd = d;
  return (dd + 1.0 + std::sqrt(dd * dd + 10.0 * dd - 7.0)) / (2.0 * (dd - 1.0));
}

struct BlowUpReport {
  long tau0 = 0;
  LatticePoint point;
  double v_value = 0.0;
  long blowup_time() const { return tau0 + 1; }
};

struct NumericOverflow {
  long tau = 0;
  LatticePoint point;
};

template <typename Scalar>
struct SimState {
  long tau = 1;
  Field<Scalar> u_prev;
  Field<Scalar> u_curr;
};

template <typename Scalar>
using StepResult = std::variant<Field<Scalar>, BlowUpReport, NumericOverflow>;

/// Pointwise pieces of the proposed scheme, shared by the stepper, the
/// uniform recurrence and the diagnostics.
template <typename Scalar>
class ProposedKernel {
 public:
  explicit ProposedKernel(const SchemeParams& params)
      : p_(params.p),
        scaled_(params.scaled),
        delta_sq_(from_double<Scalar>(params.delta) * from_double<Scalar>(params.delta)),
        threshold_(params.threshold()) {
    params.validate();
    if (is_integral_exponent(p_ - 1.0) && p_ - 1.0 <= 16.0) int_exp_ = static_cast<int>(p_ - 1.0);
    if constexpr (is_exact_v<Scalar>) {
      if (int_exp_ < 0) throw std::domain_error("exact arithmetic needs an integer exponent p");
    }
  }

  /// 1 - s(v) (scaled) or 2 - delta^2 s(v) (physical), s(v) = sign(v)|v|^(p-1).
  Scalar denominator(const Scalar& v) const {
    const Scalar s = signed_pow_pm1(v);
    return scaled_ ? Scalar(Scalar(1) - s) : Scalar(Scalar(2) - delta_sq_ * s);
  }

  /// v >= threshold. Exact scalars compare through the denominator, which is
  /// the same condition without an irrational root. Doubles also treat a
  /// nonpositive denominator as reaching threshold, which can only differ from
  /// the direct comparison by rounding of the threshold itself.
  bool reaches_threshold(const Scalar& v) const { return reaches_threshold(v, denominator(v)); }

  /// Same, with denominator(v) already at hand.
  bool reaches_threshold(const Scalar& v, const Scalar& den) const {
    if (!(v > Scalar(0))) return false;
    if constexpr (is_exact_v<Scalar>) {
      return !(den > Scalar(0));
    } else {
      return v >= threshold_ || !(den > 0.0);
    }
  }

  /// u_prev-independent part: u_next + u_prev.
  Scalar sum_next_prev(const Scalar& v) const {
    const Scalar num = scaled_ ? Scalar(Scalar(2) * v) : Scalar(Scalar(4) * v);
    return num / denominator(v);
  }

  /// u_next + u_prev - 2v: 2|v|^p / (1 - s(v)) scaled, 2 delta^2 |v|^p / (2 - delta^2 s(v)) physical.
  Scalar gain(const Scalar& v) const { return gain(v, denominator(v)); }

  Scalar gain(const Scalar& v, const Scalar& den) const {
    // |v|^p = |v| * |v|^(p-1)
    const Scalar num = Scalar(2) * abs_value(v) * abs_value(signed_pow_pm1(v));
    return (scaled_ ? num : Scalar(delta_sq_ * num)) / den;
  }

  double threshold() const { return threshold_; }

 private:
  // sign(v)|v|^(p-1); small integer exponents are multiplied out.
  Scalar signed_pow_pm1(const Scalar& v) const {
    if (int_exp_ < 0) return signed_pow(v, p_ - 1.0);
    const Scalar a = abs_value(v);
    Scalar m(1);
    for (int k = 0; k < int_exp_; ++k) m *= a;
    return v < Scalar(0) ? Scalar(-m) : m;
  }

  double p_;
  int int_exp_ = -1;
  bool scaled_;
  Scalar delta_sq_;
  double threshold_;
};

/// First (lexicographically smallest) point with v >= threshold.
template <typename Scalar>
std::optional<FieldExtremum<Scalar>> detect_blowup(const Field<Scalar>& v, const Scalar& threshold) {
  if (!(threshold > Scalar(0))) throw std::invalid_argument("threshold must be positive");
  const auto& vals = v.values();
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (vals[i] >= threshold) return FieldExtremum<Scalar>{vals[i], v.layout().point_at(static_cast<std::size_t>(i))};
  return std::nullopt;
}

/// Detection against the scheme's own threshold.
template <typename Scalar>
std::optional<FieldExtremum<Scalar>> detect_blowup(const Field<Scalar>& v, const ProposedKernel<Scalar>& kernel) {
  const auto& vals = v.values();
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (kernel.reaches_threshold(vals[i]))
      return FieldExtremum<Scalar>{vals[i], v.layout().point_at(static_cast<std::size_t>(i))};
  return std::nullopt;
}

/// One step of the proposed scheme given v = M(u_curr) already computed.
template <typename Scalar>
StepResult<Scalar> advance_proposed(const Field<Scalar>& u_prev, const Field<Scalar>& v,
                                    const ProposedKernel<Scalar>& kernel, long tau) {
  if (u_prev.dim() != v.dim()) throw std::invalid_argument("field dimensions differ");
  if (auto hit = detect_blowup(v, kernel)) return BlowUpReport{tau, hit->point, to_double(hit->value)};

  const Coord radius = std::max(v.declared_radius(), u_prev.declared_radius());
  const auto vr = resized(v, radius);
  const auto pr = resized(u_prev, radius);
  typename Field<Scalar>::Values next(vr.values().size());
  for (Eigen::Index i = 0; i < next.size(); ++i) {
    next[i] = kernel.sum_next_prev(vr.values()[i]) - pr.values()[i];
    if (!is_finite(next[i])) return NumericOverflow{tau, vr.layout().point_at(static_cast<std::size_t>(i))};
  }
  return Field<Scalar>(vr.shared_layout(), std::move(next));
}

template <typename Scalar>
StepResult<Scalar> step_proposed(const Field<Scalar>& u_prev, const Field<Scalar>& u_curr,
                                 const SchemeParams& params, long tau = 1) {
  if (u_prev.dim() != params.d || u_curr.dim() != params.d)
    throw std::invalid_argument("field dimension does not match scheme dimension");
  const ProposedKernel<Scalar> kernel(params);
  return advance_proposed(u_prev, neighbor_average(u_curr), kernel, tau);
}

template <typename Scalar>
Scalar lattice_ratio(const SchemeParams& params) {
  if (params.lambda) return from_double<Scalar>(*params.lambda);
  return Scalar(1) / Scalar(params.d);
}

template <typename Scalar>
std::variant<Field<Scalar>, NumericOverflow> step_naive(const Field<Scalar>& u_prev,
                                                        const Field<Scalar>& u_curr,
                                                        const SchemeParams& params, long tau = 1) {
  params.validate();
  if (u_prev.dim() != params.d || u_curr.dim() != params.d)
    throw std::invalid_argument("field dimension does not match scheme dimension");
  if constexpr (is_exact_v<Scalar>) {
    if (!is_integral_exponent(params.p)) throw std::domain_error("exact arithmetic needs an integer exponent p");
  }
  const Scalar coupling = Scalar(2 * params.d) * lattice_ratio<Scalar>(params);
  const Scalar delta = from_double<Scalar>(params.delta);
  const Scalar delta_sq = delta * delta;

  const auto avg = neighbor_average(u_curr);
  const Coord radius = std::max(avg.declared_radius(), u_prev.declared_radius());
  const auto a = resized(avg, radius);
  const auto u = resized(u_curr, radius);
  const auto prev = resized(u_prev, radius);
  typename Field<Scalar>::Values next(a.values().size());
  for (Eigen::Index i = 0; i < next.size(); ++i) {
    const Scalar& ui = u.values()[i];
    next[i] = coupling * a.values()[i] + (Scalar(2) - coupling) * ui - prev.values()[i] +
              delta_sq * abs_pow(ui, params.p);
    if (!is_finite(next[i])) return NumericOverflow{tau, a.layout().point_at(static_cast<std::size_t>(i))};
  }
  return Field<Scalar>(a.shared_layout(), std::move(next));
}

/// (2/delta^2)^(1/(p-1)) in the requested arithmetic. Exact arithmetic needs the
/// root to be rational, which holds e.g. for p = 2 or p = 3 with delta = 1/2.
template <typename Scalar>
Scalar scale_factor(const SchemeParams& params) {
  params.validate();
  if constexpr (!is_exact_v<Scalar>) {
    return params.scale_factor();
  } else {
    if (!is_integral_exponent(params.p)) throw std::domain_error("exact scaling needs an integer exponent p");
    const auto root = static_cast<unsigned long>(params.p - 1.0);
    const Scalar delta = from_double<Scalar>(params.delta);
    const Scalar base = Scalar(2) / (delta * delta);
    using boost::multiprecision::mpz_int;
    auto exact_root = [root](const mpz_int& x) -> mpz_int {
      mpz_int r;
      if (mpz_root(r.backend().data(), x.backend().data(), root) == 0)
        throw std::domain_error("scale factor is irrational for these parameters");
      return r;
    };
    const mpz_int num = exact_root(boost::multiprecision::numerator(base));
    const mpz_int den = exact_root(boost::multiprecision::denominator(base));
    return Scalar(num) / Scalar(den);
  }
}

template <typename Scalar>
Field<Scalar> to_scaled(const Field<Scalar>& f, const SchemeParams& params) {
  const Scalar factor = scale_factor<Scalar>(params);
  typename Field<Scalar>::Values out = f.values() / factor;
  return Field<Scalar>(f.shared_layout(), std::move(out));
}

template <typename Scalar>
Field<Scalar> from_scaled(const Field<Scalar>& f, const SchemeParams& params) {
  const Scalar factor = scale_factor<Scalar>(params);
  typename Field<Scalar>::Values out = f.values() * factor;
  return Field<Scalar>(f.shared_layout(), std::move(out));
}

struct HypothesisReport {
  Coord K = 0;
  bool a1_ok = false;
  bool a2_ok = false;
  bool p_ok = false;
  bool overall = false;
  std::string describe() const;
};

/// Support bound, strict mass increase, and 1 < p <= (d+1)/(d-1) (any p > 1 for d = 1).
template <typename Scalar>
HypothesisReport validate_hypotheses(const Field<Scalar>& u0, const Field<Scalar>& u1, Coord K,
                                     const SchemeParams& params) {
  if (K <= 0) throw std::invalid_argument("K must be positive");
  HypothesisReport r;
  r.K = K;
  r.a1_ok = support_radius(u0) <= K && support_radius(u1) <= K;
  r.a2_ok = field_sum(u1) > field_sum(u0);
  r.p_ok = params.p > 1.0 && (params.d == 1 || params.p <= kato_exponent(params.d));
  r.overall = r.a1_ok && r.a2_ok && r.p_ok;
  return r;
}

}  // namespace dwave
