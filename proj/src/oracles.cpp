#include "dwave/oracles.hpp"

#include <json.hpp>

#include <algorithm>
#include <limits>
#include <random>

namespace dwave {

namespace {

std::string instance_json(double p, const std::vector<double>& xs, const std::vector<double>& ls) {
  nlohmann::ordered_json j;
  j["p"] = p;
  j["xs"] = xs;
  j["lambdas"] = ls;
  return j.dump();
}

}  // namespace

SuiteSummary jensen_suite(std::uint64_t seed, long cases, int max_s) {
  if (cases < 1) throw std::invalid_argument("need at least one case");
  if (max_s < 0) throw std::invalid_argument("max_s must be non-negative");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> size_dist(0, max_s);
  std::uniform_real_distribution<double> p_dist(std::nextafter(1.0, 2.0), 3.0);
  std::uniform_real_distribution<double> x_dist(-0.99, 0.99);
  std::exponential_distribution<double> w_dist(1.0);

  SuiteSummary out;
  out.suite = "jensen";
  out.min_gap = std::numeric_limits<double>::infinity();
  std::vector<double> xs, ls;
  while (out.cases < cases) {
    const int s = size_dist(rng);
    const double p = p_dist(rng);
    xs.resize(static_cast<std::size_t>(s) + 1);
    ls.resize(xs.size());
    for (auto& x : xs) x = x_dist(rng);
    std::sort(xs.begin(), xs.end());
    double total = 0.0;
    for (auto& l : ls) total += (l = w_dist(rng));
    for (auto& l : ls) l /= total;
    double mean = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) mean += ls[j] * xs[j];
    if (xs[0] < 0.0 || mean < 0.0) {
      ++out.discarded;
      continue;
    }
    const ConvexComboInstance<double> inst(p, xs, ls);
    const double gap = jensen_gap(inst);
    ++out.cases;
    if (ls[0] == 0.0) ++out.lambda0_zero;
    if (gap < out.min_gap) {
      out.min_gap = gap;
      out.worst_instance = instance_json(p, xs, ls);
    }
  }
  return out;
}

SuiteSummary convexity_suite(const std::vector<double>& ps, double grid_step) {
  SuiteSummary out;
  out.suite = "convexity";
  out.min_gap = std::numeric_limits<double>::infinity();
  for (double p : ps) {
    const double m = convexity_scan(p, grid_step);
    ++out.cases;
    if (m < out.min_gap) {
      out.min_gap = m;
      out.worst_instance = nlohmann::ordered_json{{"p", p}, {"grid_step", grid_step}}.dump();
    }
  }
  return out;
}

SuiteSummary phi_suite(const std::vector<double>& ps, double grid_step) {
  SuiteSummary out;
  out.suite = "phi";
  out.min_gap = std::numeric_limits<double>::infinity();
  const auto n = static_cast<long>(std::llround(1.0 / grid_step));
  for (double p : ps) {
    for (long i = 0; i < n; ++i) {
      const double l = static_cast<double>(i) / static_cast<double>(n);
      const double v = phi(l, p);
      ++out.cases;
      if (v < out.min_gap) {
        out.min_gap = v;
        out.worst_instance = nlohmann::ordered_json{{"p", p}, {"lambda", l}}.dump();
      }
    }
    ++out.cases;
    if (phi(1.0, p) != 0.0) {
      out.min_gap = std::min(out.min_gap, -std::abs(phi(1.0, p)));
      out.worst_instance = nlohmann::ordered_json{{"p", p}, {"lambda", 1.0}}.dump();
    }
  }
  return out;
}

SuiteSummary monotonicity_suite(const std::vector<double>& ps, double grid_step) {
  SuiteSummary out;
  out.suite = "h_monotone";
  out.min_gap = std::numeric_limits<double>::infinity();
  const auto n = static_cast<long>(std::llround(1.0 / grid_step));
  for (double p : ps) {
    double prev = h(0.0, p);
    for (long i = 1; i < n; ++i) {
      const double x = static_cast<double>(i) / static_cast<double>(n);
      const double cur = h(x, p);
      ++out.cases;
      if (cur - prev < out.min_gap) {
        out.min_gap = cur - prev;
        out.worst_instance = nlohmann::ordered_json{{"p", p}, {"x", x}}.dump();
      }
      prev = cur;
    }
  }
  return out;
}

std::string suite_json(const SuiteSummary& s) {
  nlohmann::ordered_json j;
  j["suite"] = s.suite;
  j["cases"] = s.cases;
  j["min_gap"] = s.min_gap;
  j["worst_instance"] = s.worst_instance.empty() ? nlohmann::ordered_json() : nlohmann::ordered_json::parse(s.worst_instance);
  if (s.suite == "jensen") {
    j["discarded"] = s.discarded;
    j["lambda0_zero"] = s.lambda0_zero;
  }
  return j.dump();
}

}  // namespace dwave
