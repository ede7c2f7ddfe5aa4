#include "dwave/consistency.hpp"
#include "dwave/scalar.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dwave {

namespace {

double sq_norm(std::span<const double> x) {
  double s = 0.0;
  for (double c : x) s += c * c;
  return s;
}

struct Stencil {
  double center, forward, backward, v;
};

Stencil sample_stencil(const SmoothSampler& s, double t, std::span<const double> x, double delta) {
  if (static_cast<int>(x.size()) != s.d) throw std::invalid_argument("sample point arity does not match sampler");
  const double xi = std::sqrt(static_cast<double>(s.d)) * delta;
  std::vector<double> y(x.begin(), x.end());
  double acc = 0.0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    y[k] = x[k] + xi;
    acc += s.u(t, y);
    y[k] = x[k] - xi;
    acc += s.u(t, y);
    y[k] = x[k];
  }
  return {s.u(t, x), s.u(t + delta, x), s.u(t - delta, x), acc / (2.0 * s.d)};
}

double pde_operator(const SmoothSampler& s, double t, std::span<const double> x, double p) {
  return s.u_tt(t, x) - s.laplacian(t, x) - abs_pow(s.u(t, x), p);
}

}  // namespace

std::vector<SmoothSampler> sampler_catalog(int d) {
  if (d < 1) throw std::invalid_argument("d must be at least 1");
  std::vector<SmoothSampler> out;

  // A cos(w t) exp(-|x|^2)
  {
    constexpr double A = 0.5, w = 1.3;
    SmoothSampler s{"gaussian_trig", d, {}, {}, {}};
    s.u = [](double t, std::span<const double> x) { return A * std::cos(w * t) * std::exp(-sq_norm(x)); };
    s.u_tt = [](double t, std::span<const double> x) { return -w * w * A * std::cos(w * t) * std::exp(-sq_norm(x)); };
    s.laplacian = [d](double t, std::span<const double> x) {
      const double r2 = sq_norm(x);
      return A * std::cos(w * t) * std::exp(-r2) * (4.0 * r2 - 2.0 * d);
    };
    out.push_back(std::move(s));
  }
  // A (1 + t + t^2/2)(1 + sum_k x_k^4 / 4)
  {
    constexpr double A = 0.2;
    auto q = [](std::span<const double> x) {
      double s = 1.0;
      for (double c : x) s += c * c * c * c / 4.0;
      return s;
    };
    SmoothSampler s{"polynomial", d, {}, {}, {}};
    s.u = [q](double t, std::span<const double> x) { return A * (1.0 + t + t * t / 2.0) * q(x); };
    s.u_tt = [q](double, std::span<const double> x) { return A * q(x); };
    s.laplacian = [](double t, std::span<const double> x) {
      double s2 = 0.0;
      for (double c : x) s2 += 3.0 * c * c;
      return A * (1.0 + t + t * t / 2.0) * s2;
    };
    out.push_back(std::move(s));
  }
  // a t + b
  {
    constexpr double a = 0.3, b = 0.2;
    SmoothSampler s{"linear_t", d, {}, {}, {}};
    s.u = [](double t, std::span<const double>) { return a * t + b; };
    s.u_tt = [](double, std::span<const double>) { return 0.0; };
    s.laplacian = [](double, std::span<const double>) { return 0.0; };
    out.push_back(std::move(s));
  }
  {
    constexpr double c = 0.3;
    SmoothSampler s{"constant", d, {}, {}, {}};
    s.u = [](double, std::span<const double>) { return c; };
    s.u_tt = [](double, std::span<const double>) { return 0.0; };
    s.laplacian = [](double, std::span<const double>) { return 0.0; };
    out.push_back(std::move(s));
  }
  return out;
}

SmoothSampler zero_sampler(int d) {
  auto zero = [](double, std::span<const double>) { return 0.0; };
  return {"zero", d, zero, zero, zero};
}

std::vector<SamplePoint> default_sample_points(int d) {
  if (d == 1) return {{0.5, {0.0}}, {0.5, {0.3}}, {1.3, {-0.7}}, {1.3, {0.45}}};
  if (d == 2) return {{0.5, {0.0, 0.0}}, {0.5, {0.3, -0.2}}, {1.3, {-0.5, 0.4}}, {1.3, {0.25, 0.6}}};
  std::vector<SamplePoint> pts{{0.5, std::vector<double>(static_cast<std::size_t>(d), 0.0)},
                               {1.3, std::vector<double>(static_cast<std::size_t>(d), 0.2)}};
  return pts;
}

double truncation_residual(const SmoothSampler& s, double t, std::span<const double> x, double delta, double p) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  const auto st = sample_stencil(s, t, x, delta);
  const double denom = 2.0 - delta * delta * signed_pow(st.v, p - 1.0);
  if (!(denom > 0.0)) throw std::domain_error("scheme denominator not positive at sample; choose a smaller amplitude");
  const double scheme = (st.forward + st.backward - 4.0 * st.v / denom) / (delta * delta);
  return scheme - pde_operator(s, t, x, p);
}

double scheme_form_residual(const SmoothSampler& s, double t, std::span<const double> x, double delta, double p) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  const auto st = sample_stencil(s, t, x, delta);
  const double two_level = st.forward + st.backward - st.v * (2.0 + delta * delta * signed_pow(st.v, p - 1.0));
  return two_level / (delta * delta) - pde_operator(s, t, x, p);
}

double loglog_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("need at least two points for a slope");
  const auto n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    A(i, 0) = std::log(xs[static_cast<std::size_t>(i)]);
    A(i, 1) = 1.0;
    b(i) = std::log(ys[static_cast<std::size_t>(i)]);
  }
  const Eigen::Vector2d coef = A.colPivHouseholderQr().solve(b);
  return coef(0);
}

ObservedOrder refinement_study(const SmoothSampler& s, std::span<const double> deltas,
                               const std::vector<SamplePoint>& points, double p) {
  if (deltas.size() < 3) throw std::invalid_argument("refinement study needs at least three deltas");
  for (std::size_t i = 1; i < deltas.size(); ++i)
    if (std::abs(deltas[i] - deltas[i - 1] / 2.0) > 1e-12 * deltas[i - 1])
      throw std::invalid_argument("each delta must be half the previous one");
  if (points.empty()) throw std::invalid_argument("need at least one sample point");

  constexpr double noise_floor = 100.0 * std::numeric_limits<double>::epsilon();
  ObservedOrder out;
  std::vector<double> kept_d, kept_r;
  for (double delta : deltas) {
    double worst = 0.0;
    for (const auto& pt : points) worst = std::max(worst, std::abs(truncation_residual(s, pt.t, pt.x, delta, p)));
    out.deltas.push_back(delta);
    out.max_residuals.push_back(worst);
    if (worst >= noise_floor) {
      kept_d.push_back(delta);
      kept_r.push_back(worst);
    }
  }
  out.exact = kept_d.empty();
  if (kept_d.size() >= 2) out.slope = loglog_slope(kept_d, kept_r);
  return out;
}

}  // namespace dwave
