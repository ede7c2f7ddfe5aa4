#include "dwave/consistency.hpp"

#include <doctest.h>

#include <cmath>

using namespace dwave;

TEST_CASE("sampler derivatives match finite differences") {
  for (int d = 1; d <= 3; ++d)
    for (const auto& s : sampler_catalog(d))
      for (const auto& pt : default_sample_points(d)) {
        const double h = 1e-3;
        const double utt = (s.u(pt.t + h, pt.x) - 2 * s.u(pt.t, pt.x) + s.u(pt.t - h, pt.x)) / (h * h);
        double lap = 0.0;
        auto y = pt.x;
        for (std::size_t k = 0; k < y.size(); ++k) {
          y[k] = pt.x[k] + h;
          lap += s.u(pt.t, y);
          y[k] = pt.x[k] - h;
          lap += s.u(pt.t, y);
          y[k] = pt.x[k];
          lap -= 2 * s.u(pt.t, pt.x);
        }
        lap /= h * h;
        INFO(s.name, " d=", d);
        CHECK(s.u_tt(pt.t, pt.x) == doctest::Approx(utt).epsilon(1e-5).scale(1.0));
        CHECK(s.laplacian(pt.t, pt.x) == doctest::Approx(lap).epsilon(1e-5).scale(1.0));
      }
}

TEST_CASE("zero sampler is exact") {
  const double deltas[] = {0.04, 0.02, 0.01};
  auto z = zero_sampler(2);
  CHECK(truncation_residual(z, 0.5, std::vector<double>{0.1, 0.2}, 0.1, 2.0) == 0.0);
  auto study = refinement_study(z, deltas, default_sample_points(2), 2.0);
  CHECK(study.exact);
  CHECK_FALSE(study.slope);
  CHECK(study.max_residuals == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("constant data: residual is the nonlinearity mismatch") {
  // v = c, so S[u] = (2c - 4c/(2 - delta^2 c^(p-1))) / delta^2 = -c^p (1 + delta^2 c^(p-1)/2 + ...)
  const auto cat = sampler_catalog(1);
  const auto& c = cat[3];
  REQUIRE(c.name == "constant");
  const double cv = 0.3, p = 2.0;
  for (double delta : {0.1, 0.05}) {
    const double r = truncation_residual(c, 0.7, std::vector<double>{0.2}, delta, p);
    const double exact = (2 * cv - 4 * cv / (2 - delta * delta * cv)) / (delta * delta) + cv * cv;
    CHECK(r == doctest::Approx(exact).epsilon(1e-9));
    CHECK(r == doctest::Approx(-delta * delta * std::pow(cv, 3) / 2).epsilon(0.05));
  }
}

TEST_CASE("second order for every catalog sampler") {
  const double deltas[] = {0.04, 0.02, 0.01};
  for (int d = 1; d <= 2; ++d)
    for (double p : {2.0, 3.0})
      for (const auto& s : sampler_catalog(d)) {
        auto study = refinement_study(s, deltas, default_sample_points(d), p);
        INFO(s.name, " d=", d, " p=", p);
        REQUIRE(study.slope);
        CHECK(*study.slope >= 1.8);
        CHECK(*study.slope <= 2.2);
        CHECK(study.max_residuals[0] / study.max_residuals[1] == doctest::Approx(4.0).epsilon(0.1));
      }
}

TEST_CASE("two-level form") {
  auto cat = sampler_catalog(1);
  for (const auto& s : cat) {
    const double r1 = std::abs(scheme_form_residual(s, 0.5, std::vector<double>{0.3}, 0.02, 2.0));
    const double r2 = std::abs(scheme_form_residual(s, 0.5, std::vector<double>{0.3}, 0.01, 2.0));
    if (s.name == "constant" || s.name == "linear_t") {
      // Exact up to rounding: v(2 + delta^2 v) - 2v = delta^2 v^2.
      CHECK(r1 < 1e-10);
    } else {
      CHECK(r2 < r1);
    }
  }
}

TEST_CASE("loglog_slope and argument checks") {
  const std::vector<double> x{1, 2, 4, 8}, y{3, 12, 48, 192};
  CHECK(loglog_slope(x, y) == doctest::Approx(2.0).epsilon(1e-12));
  const double bad[] = {0.04, 0.03, 0.01};
  CHECK_THROWS_AS(refinement_study(sampler_catalog(1)[0], bad, default_sample_points(1), 2.0), std::invalid_argument);
  const double two[] = {0.04, 0.02};
  CHECK_THROWS_AS(refinement_study(sampler_catalog(1)[0], two, default_sample_points(1), 2.0), std::invalid_argument);
  auto big = sampler_catalog(1)[3];
  big.u = [](double, std::span<const double>) { return 100.0; };
  CHECK_THROWS_AS(truncation_residual(big, 0.0, std::vector<double>{0.0}, 0.5, 2.0), std::domain_error);
}
