#include "dwave/diagnostics.hpp"
#include "dwave/format.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace dwave {

namespace {

double spow(double x, double e) { return signed_pow(x, e); }

// Successor of records[i] when it is the record for tau + 1.
const DiagnosticsRecord* successor(const std::vector<DiagnosticsRecord>& records, std::size_t i) {
  if (i + 1 < records.size() && records[i + 1].tau == records[i].tau + 1) return &records[i + 1];
  return nullptr;
}

const DiagnosticsRecord* predecessor(const std::vector<DiagnosticsRecord>& records, std::size_t i) {
  if (i > 0 && records[i - 1].tau + 1 == records[i].tau) return &records[i - 1];
  return nullptr;
}

std::optional<double> next_U(const std::vector<DiagnosticsRecord>& records, std::size_t i) {
  if (records[i].U_next) return records[i].U_next;
  if (auto* s = successor(records, i)) return s->U;
  return std::nullopt;
}

// Evaluates `test` at every record; an empty optional means "not applicable here".
InequalityMonitor run_monitor(std::string name, bool hard, std::optional<double> constant,
                              const std::vector<DiagnosticsRecord>& records,
                              const std::function<std::optional<bool>(std::size_t)>& test) {
  InequalityMonitor m;
  m.name = std::move(name);
  m.hard = hard;
  m.fitted_constant = constant;
  bool all_after = true;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto ok = test(i);
    if (!ok) continue;
    ++m.checked_steps;
    if (*ok) {
      if (!m.onset_tau) m.onset_tau = records[i].tau;
    } else {
      ++m.violations;
      if (m.onset_tau) all_after = false;
    }
  }
  m.holds_through_end = m.onset_tau.has_value() && all_after;
  return m;
}

}  // namespace

DiagnosticsConstants fit_constants(const std::vector<DiagnosticsRecord>& records, int d, double p,
                                   double tail_fraction) {
  if (records.size() < 10) throw std::invalid_argument("fitting constants needs at least 10 records");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) throw std::invalid_argument("tail_fraction must lie in (0, 1]");
  const auto n = records.size();
  auto start = static_cast<std::size_t>(std::floor(static_cast<double>(n) * (1.0 - tail_fraction)));
  start = std::min(start, n - 1);

  constexpr double inf = std::numeric_limits<double>::infinity();
  DiagnosticsConstants c;
  c.d = d;
  c.p = p;
  c.onset_tau = records[start].tau;
  double c_t = 0.0, c0 = inf, c1 = inf, c3 = inf, cp = inf;
  for (std::size_t i = start; i < n; ++i) {
    const auto& r = records[i];
    const double tau = static_cast<double>(r.tau);
    if (r.tau < 1) continue;
    c_t = std::max(c_t, static_cast<double>(r.T) / std::pow(tau, d));
    c0 = std::min(c0, r.U / tau);
    cp = std::min(cp, r.U / std::pow(tau, d + 1));
    if (r.tau >= 2) c1 = std::min(c1, r.U / (tau * std::log(tau)));
    if (auto un = next_U(records, i); un && r.U > 0.0) {
      const double du = *un - r.U;
      c3 = std::min(c3, du * du / (std::pow(tau, -(p + 1.0)) * std::pow(r.U, p + 1.0)));
    }
  }
  auto finite_or_zero = [](double x) { return std::isfinite(x) ? x : 0.0; };
  c.C_T = c_t;
  c.C2 = 2.0 * std::pow(c_t, 1.0 - p);
  c.C0 = finite_or_zero(c0);
  c.C1_prime = finite_or_zero(c1);
  c.C3 = finite_or_zero(c3);
  c.C_prime = finite_or_zero(cp);
  return c;
}

void attach_energy(std::vector<DiagnosticsRecord>& records, const DiagnosticsConstants& consts) {
  const double p = consts.p;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& r = records[i];
    r.E.reset();
    if (r.tau < 1) continue;
    auto un = next_U(records, i);
    if (!un) continue;
    const double du = *un - r.U;
    r.E = du * du - consts.C2 / (p + 1.0) * std::pow(static_cast<double>(r.tau), -(p + 1.0)) * spow(r.U, p + 1.0);
  }
}

const InequalityMonitor& MonitorReport::get(const std::string& name) const {
  for (const auto& m : monitors)
    if (m.name == name) return m;
  throw std::out_of_range("no monitor named " + name);
}

bool MonitorReport::hard_ok() const {
  return std::all_of(monitors.begin(), monitors.end(), [](const auto& m) { return !m.hard || m.violations == 0; });
}

MonitorReport monitor_inequalities(const std::vector<DiagnosticsRecord>& records,
                                   const DiagnosticsConstants& consts) {
  const double p = consts.p;
  const int d = consts.d;
  auto tau_of = [&](std::size_t i) { return static_cast<double>(records[i].tau); };
  MonitorReport report;
  auto& ms = report.monitors;

  ms.push_back(run_monitor("U<T", true, std::nullopt, records, [&](std::size_t i) -> std::optional<bool> {
    return records[i].U < static_cast<double>(records[i].T);
  }));
  ms.push_back(run_monitor("d2U>=0", true, std::nullopt, records, [&](std::size_t i) -> std::optional<bool> {
    if (!records[i].d2U) return std::nullopt;
    return *records[i].d2U >= 0.0;
  }));

  // Growth inequalities need a positive constant and positive mass to hold at all.
  ms.push_back(run_monitor("U>=C0*tau", false, consts.C0, records, [&](std::size_t i) -> std::optional<bool> {
    if (records[i].tau < 1) return std::nullopt;
    const double U = records[i].U;
    return consts.C0 > 0.0 && U > 0.0 && U >= consts.C0 * tau_of(i);
  }));
  ms.push_back(run_monitor("d2U>=C2*tau^-(p+1)*U^p", false, consts.C2, records,
                           [&](std::size_t i) -> std::optional<bool> {
                             const auto& r = records[i];
                             if (!r.d2U || r.tau < 1) return std::nullopt;
                             return r.U > 0.0 &&
                                    *r.d2U >= consts.C2 * std::pow(tau_of(i), -(p + 1.0)) * std::pow(r.U, p);
                           }));
  ms.push_back(run_monitor("U>=C1'*tau*log(tau)", false, consts.C1_prime, records,
                           [&](std::size_t i) -> std::optional<bool> {
                             if (records[i].tau < 2) return std::nullopt;
                             const double U = records[i].U;
                             return consts.C1_prime > 0.0 && U > 0.0 &&
                                    U >= consts.C1_prime * tau_of(i) * std::log(tau_of(i));
                           }));
  ms.push_back(run_monitor("E increasing", false, std::nullopt, records, [&](std::size_t i) -> std::optional<bool> {
    const auto* prev = predecessor(records, i);
    if (!prev || !prev->E || !records[i].E || prev->tau < 1) return std::nullopt;
    return *records[i].E - *prev->E > 0.0;
  }));
  // Whenever the d2U lower bound holds at tau and 0 <= U^{tau-1} <= U^tau <= U^{tau+1},
  // E^tau - E^{tau-1} >= C2 tau^-(p+1) (U^tau)^(p+1) phi(U^{tau-1}/U^tau) >= 0.
  ms.push_back(run_monitor("E telescoping", true, consts.C2, records, [&](std::size_t i) -> std::optional<bool> {
    const auto& r = records[i];
    const auto* prev = predecessor(records, i);
    auto un = next_U(records, i);
    if (!prev || !un || !r.d2U || !r.E || !prev->E || prev->tau < 1) return std::nullopt;
    const bool premise = prev->U >= 0.0 && prev->U <= r.U && r.U <= *un && r.U > 0.0 &&
                         *r.d2U >= consts.C2 * std::pow(tau_of(i), -(p + 1.0)) * std::pow(r.U, p);
    if (!premise) return std::nullopt;
    const double tol = 1e-9 * (std::abs(*r.E) + std::abs(*prev->E));
    return *r.E - *prev->E >= -tol;
  }));
  ms.push_back(run_monitor("(dU)^2>=C3*tau^-(p+1)*U^(p+1)", false, consts.C3, records,
                           [&](std::size_t i) -> std::optional<bool> {
                             auto un = next_U(records, i);
                             const auto& r = records[i];
                             if (!un || r.tau < 1) return std::nullopt;
                             const double du = *un - r.U;
                             return consts.C3 > 0.0 && r.U > 0.0 &&
                                    du * du >= consts.C3 * std::pow(tau_of(i), -(p + 1.0)) * std::pow(r.U, p + 1.0);
                           }));
  ms.push_back(run_monitor("U>=C'*tau^(d+1)", false, consts.C_prime, records,
                           [&](std::size_t i) -> std::optional<bool> {
                             if (records[i].tau < 1) return std::nullopt;
                             const double U = records[i].U;
                             return consts.C_prime > 0.0 && U > 0.0 && U >= consts.C_prime * std::pow(tau_of(i), d + 1);
                           }));

  for (const auto& r : records) {
    if (r.minv < 0.0) ++report.lemma_hypothesis_failures;
    report.gain_sign_violations += r.negative_gain_points;
  }
  return report;
}

void write_trajectory_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& records) {
  auto opt = [](const std::optional<double>& x) { return x ? format_double(*x) : std::string(); };
  os << "tau,U,T,maxv,minv,radius,d2U,E\n";
  for (const auto& r : records) {
    os << r.tau << ',' << format_double(r.U) << ',' << r.T << ',' << format_double(r.maxv) << ','
       << format_double(r.minv) << ',' << r.radius << ',' << opt(r.d2U) << ',' << opt(r.E) << '\n';
  }
}

std::string monitor_report_json(const MonitorReport& report, const DiagnosticsConstants& consts) {
  nlohmann::ordered_json j;
  j["constants"] = {{"C_T", consts.C_T}, {"C2", consts.C2},        {"C0", consts.C0},
                    {"C1_prime", consts.C1_prime}, {"C3", consts.C3}, {"C_prime", consts.C_prime},
                    {"onset_tau", consts.onset_tau}};
  auto& ineq = j["inequalities"];
  ineq = nlohmann::ordered_json::object();
  for (const auto& m : report.monitors) {
    nlohmann::ordered_json e;
    e["onset_tau"] = m.onset_tau ? nlohmann::ordered_json(*m.onset_tau) : nlohmann::ordered_json();
    e["holds_through_end"] = m.holds_through_end;
    e["fitted_constant"] = m.fitted_constant ? nlohmann::ordered_json(*m.fitted_constant) : nlohmann::ordered_json();
    e["hard"] = m.hard;
    e["checked_steps"] = m.checked_steps;
    e["violations"] = m.violations;
    ineq[m.name] = std::move(e);
  }
  j["lemma_hypothesis_failures"] = report.lemma_hypothesis_failures;
  j["gain_sign_violations"] = report.gain_sign_violations;
  return j.dump(2);
}

}  // namespace dwave
