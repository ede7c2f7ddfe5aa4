#include "dwave/experiment.hpp"

#include "dwave/consistency.hpp"
#include "dwave/diagnostics.hpp"
#include "dwave/field_io.hpp"
#include "dwave/format.hpp"
#include "dwave/oracles.hpp"
#include "dwave/simulation.hpp"
#include "dwave/uniform.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace dwave {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string to_string(Mode m) {
  switch (m) {
    case Mode::run: return "run";
    case Mode::naive: return "naive";
    case Mode::uniform: return "uniform";
    case Mode::check: return "check";
    case Mode::consistency: return "consistency";
    case Mode::sweep: return "sweep";
  }
  return "run";
}

Mode parse_mode(std::string_view s) {
  for (Mode m : {Mode::run, Mode::naive, Mode::uniform, Mode::check, Mode::consistency, Mode::sweep})
    if (to_string(m) == s) return m;
  throw ConfigError("mode: unknown mode '" + std::string(s) + "'");
}

namespace {

// Typed getters that report the key path on mismatch.
double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path + ": expected a number");
  return j.get<double>();
}

long get_integer(const json& j, const std::string& path) {
  if (j.is_number_integer()) return j.get<long>();
  if (j.is_number_float()) {
    const double x = j.get<double>();
    if (x == std::floor(x) && std::abs(x) < 9e15) return static_cast<long>(x);
  }
  throw ConfigError(path + ": expected an integer");
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path + ": expected a string");
  return j.get<std::string>();
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path + ": expected a boolean");
  return j.get<bool>();
}

std::vector<double> get_number_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

InitialData parse_initial_data(const json& j) {
  if (!j.is_object()) throw ConfigError("initial_data: expected an object");
  InitialData data;
  if (!j.contains("kind")) throw ConfigError("initial_data.kind: missing");
  const std::string kind = get_string(j.at("kind"), "initial_data.kind");
  if (kind == "ball") data.kind = InitialData::Kind::ball;
  else if (kind == "point") data.kind = InitialData::Kind::point;
  else if (kind == "file") data.kind = InitialData::Kind::file;
  else throw ConfigError("initial_data.kind: expected ball, point or file");

  static const std::map<InitialData::Kind, std::set<std::string>> allowed{
      {InitialData::Kind::ball, {"kind", "radius", "u0_value", "u1_value"}},
      {InitialData::Kind::point, {"kind", "u0_value", "u1_value"}},
      {InitialData::Kind::file, {"kind", "u0_path", "u1_path"}}};
  for (const auto& [key, value] : j.items()) {
    const std::string path = "initial_data." + key;
    if (!allowed.at(data.kind).count(key)) throw ConfigError(path + ": unknown key for kind '" + kind + "'");
    if (key == "radius") data.radius = get_integer(value, path);
    else if (key == "u0_value") data.u0_value = get_number(value, path);
    else if (key == "u1_value") data.u1_value = get_number(value, path);
    else if (key == "u0_path") data.u0_path = get_string(value, path);
    else if (key == "u1_path") data.u1_path = get_string(value, path);
  }
  if (data.kind == InitialData::Kind::ball && data.radius < 0) throw ConfigError("initial_data.radius: must be non-negative");
  if (data.kind == InitialData::Kind::file && data.u1_path.empty()) throw ConfigError("initial_data.u1_path: missing");
  return data;
}

}  // namespace

SchemeParams ExperimentConfig::scheme() const { return SchemeParams{d, p, delta, lambda, scaled}; }

void ExperimentConfig::validate() {
  warnings.clear();
  if (d < 1) throw ConfigError("d: must be at least 1");
  if (!(p > 1.0) || !std::isfinite(p)) throw ConfigError("p: p must exceed 1");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ConfigError("delta: must be positive");
  if (K && *K <= 0) throw ConfigError("K: must be positive");
  if (lambda && !(*lambda > 0.0)) throw ConfigError("lambda: must be positive");
  if (max_steps < 0) throw ConfigError("max_steps: must be non-negative");
  if (record_every < 1) throw ConfigError("record_every: must be at least 1");
  if (snapshot_every < 0) throw ConfigError("snapshot_every: must be non-negative");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) throw ConfigError("tail_fraction: must lie in (0, 1]");
  if (cases < 1) throw ConfigError("cases: must be positive");
  if (mode == Mode::uniform) {
    if (!g) throw ConfigError("g: required in uniform mode");
    if (!(*g > 0.0)) throw ConfigError("g: must be positive");
  }
  if (arithmetic == Arithmetic::rational && !is_integral_exponent(p) &&
      (mode == Mode::run || mode == Mode::naive || mode == Mode::uniform))
    throw ConfigError("arithmetic: rational mode needs an integer p");
  if (mode == Mode::consistency) {
    if (deltas.size() < 3) throw ConfigError("deltas: need at least three values");
    for (std::size_t i = 1; i < deltas.size(); ++i)
      if (std::abs(deltas[i] - deltas[i - 1] / 2.0) > 1e-12 * deltas[i - 1])
        throw ConfigError("deltas[" + std::to_string(i) + "]: each delta must halve the previous one");
  }
  for (double sp : sweep_p)
    if (!(sp > 1.0)) throw ConfigError("sweep_p: every p must exceed 1");
  for (double sd : sweep_delta)
    if (!(sd > 0.0)) throw ConfigError("sweep_delta: every delta must be positive");
  if ((mode == Mode::run || mode == Mode::sweep) && d >= 2 && p > kato_exponent(d))
    warnings.push_back("p = " + format_double(p) + " exceeds (d+1)/(d-1) = " + format_double(kato_exponent(d)) +
                       "; outside the theorem's range");
}

ExperimentConfig parse_config(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");

  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "mode") cfg.mode = parse_mode(get_string(value, key));
    else if (key == "d") cfg.d = static_cast<int>(get_integer(value, key));
    else if (key == "p") cfg.p = get_number(value, key);
    else if (key == "delta") cfg.delta = get_number(value, key);
    else if (key == "K") cfg.K = get_integer(value, key);
    else if (key == "g") cfg.g = get_number(value, key);
    else if (key == "lambda") cfg.lambda = get_number(value, key);
    else if (key == "scaled") cfg.scaled = get_bool(value, key);
    else if (key == "initial_data") cfg.initial_data = parse_initial_data(value);
    else if (key == "max_steps") cfg.max_steps = get_integer(value, key);
    else if (key == "record_every") cfg.record_every = get_integer(value, key);
    else if (key == "snapshot_every") cfg.snapshot_every = get_integer(value, key);
    else if (key == "arithmetic") {
      const std::string a = get_string(value, key);
      if (a == "float64") cfg.arithmetic = Arithmetic::float64;
      else if (a == "rational") cfg.arithmetic = Arithmetic::rational;
      else throw ConfigError("arithmetic: expected float64 or rational");
    } else if (key == "seed") {
      const long s = get_integer(value, key);
      if (s < 0) throw ConfigError("seed: must be non-negative");
      cfg.seed = static_cast<std::uint64_t>(s);
    } else if (key == "output_dir") cfg.output_dir = get_string(value, key);
    else if (key == "tail_fraction") cfg.tail_fraction = get_number(value, key);
    else if (key == "cases") cfg.cases = get_integer(value, key);
    else if (key == "deltas") cfg.deltas = get_number_list(value, key);
    else if (key == "sweep_p") cfg.sweep_p = get_number_list(value, key);
    else if (key == "sweep_delta") cfg.sweep_delta = get_number_list(value, key);
    else throw ConfigError(key + ": unknown key");
  }
  cfg.validate();
  return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;  // std::map-backed: keys come out sorted
  j["mode"] = to_string(cfg.mode);
  j["d"] = cfg.d;
  j["p"] = cfg.p;
  j["delta"] = cfg.delta;
  if (cfg.K) j["K"] = *cfg.K;
  if (cfg.g) j["g"] = *cfg.g;
  if (cfg.lambda) j["lambda"] = *cfg.lambda;
  j["scaled"] = cfg.scaled;
  json init;
  switch (cfg.initial_data.kind) {
    case InitialData::Kind::ball:
      init = {{"kind", "ball"}, {"radius", cfg.initial_data.radius},
              {"u0_value", cfg.initial_data.u0_value}, {"u1_value", cfg.initial_data.u1_value}};
      break;
    case InitialData::Kind::point:
      init = {{"kind", "point"}, {"u0_value", cfg.initial_data.u0_value}, {"u1_value", cfg.initial_data.u1_value}};
      break;
    case InitialData::Kind::file:
      init = {{"kind", "file"}, {"u0_path", cfg.initial_data.u0_path}, {"u1_path", cfg.initial_data.u1_path}};
      break;
  }
  j["initial_data"] = init;
  j["max_steps"] = cfg.max_steps;
  j["record_every"] = cfg.record_every;
  j["snapshot_every"] = cfg.snapshot_every;
  j["arithmetic"] = cfg.arithmetic == Arithmetic::rational ? "rational" : "float64";
  j["seed"] = cfg.seed;
  j["tail_fraction"] = cfg.tail_fraction;
  j["cases"] = cfg.cases;
  j["deltas"] = cfg.deltas;
  j["sweep_p"] = cfg.sweep_p;
  j["sweep_delta"] = cfg.sweep_delta;
  return j.dump();
}

std::string config_hash(const ExperimentConfig& cfg) {
  // FNV-1a, 64 bit
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config_to_json(cfg)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

std::string exponent_regime(int d, double p) {
  if (d == 1 || p <= kato_exponent(d)) return "theorem";
  if (p <= critical_exponent(d)) return "outside theorem, p <= p_c";
  return "outside theorem, p > p_c";
}

std::pair<Field<double>, Field<double>> build_initial_data(const ExperimentConfig& cfg) {
  const auto& init = cfg.initial_data;
  const int d = cfg.d;
  switch (init.kind) {
    case InitialData::Kind::point: {
      auto o = origin(d);
      return {make_field<double>(d, {{o, init.u0_value}}), make_field<double>(d, {{o, init.u1_value}})};
    }
    case InitialData::Kind::ball: {
      BallLayout ball(d, init.radius);
      std::vector<FieldEntry<double>> e0, e1;
      for (std::size_t i = 0; i < ball.size(); ++i) {
        auto n = ball.point_at(i);
        e0.push_back({n, init.u0_value});
        e1.push_back({std::move(n), init.u1_value});
      }
      return {make_field(d, e0), make_field(d, e1)};
    }
    case InitialData::Kind::file: {
      auto load = [d](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open " + path);
        auto f = read_field_jsonl(in);
        if (f.dim() != d) throw ConfigError("initial_data: " + path + " has dimension " + std::to_string(f.dim()));
        return f;
      };
      Field<double> u0 = init.u0_path.empty() ? Field<double>(d) : load(init.u0_path);
      return {std::move(u0), load(init.u1_path)};
    }
  }
  throw ConfigError("initial_data: unsupported kind");
}

namespace {

class OutputDir {
 public:
  explicit OutputDir(const std::string& dir) : root_(dir) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
  }

  template <typename Writer>
  void write(const std::string& name, Writer&& writer, ExperimentResult& result) const {
    const auto path = root_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    writer(out);
    if (!out) throw std::runtime_error("write failed for " + path.string());
    result.files.push_back(name);
  }

 private:
  fs::path root_;
};

json record_json(const DiagnosticsRecord& r) {
  json j = json::object();
  j["tau"] = r.tau;
  j["U"] = r.U;
  j["T"] = r.T;
  j["maxv"] = r.maxv;
  j["minv"] = r.minv;
  j["radius"] = r.radius;
  j["d2U"] = r.d2U ? json(*r.d2U) : json();
  j["E"] = r.E ? json(*r.E) : json();
  return j;
}

json status_json(const RunOutcome& out) {
  json j;
  if (auto* b = std::get_if<BlowUpReport>(&out.status)) {
    j = {{"status", "blowup"}, {"tau0", b->tau0}, {"point", b->point.coords}, {"v", b->v_value},
         {"blowup_time", b->blowup_time()}};
  } else if (auto* o = std::get_if<NumericOverflow>(&out.status)) {
    j = {{"status", "overflow"}, {"tau", o->tau}, {"point", o->point.coords}};
  } else {
    j = {{"status", "budget"}, {"final_tau", std::get<BudgetExhausted>(out.status).final_tau}};
  }
  return j;
}

void write_run_files(const OutputDir& dir, const RunOutcome& out, const std::optional<std::string>& monitor,
                     ExperimentResult& result) {
  dir.write("trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, out.trajectory); }, result);
  dir.write("trajectory.jsonl", [&](std::ostream& os) {
    for (const auto& r : out.trajectory) os << record_json(r).dump() << '\n';
    os << status_json(out).dump() << '\n';
  }, result);
  if (monitor) dir.write("monitor.json", [&](std::ostream& os) { os << *monitor << '\n'; }, result);
  for (const auto& snap : out.snapshots)
    dir.write("snapshot_" + std::to_string(snap.tau) + ".jsonl",
              [&](std::ostream& os) { write_field_jsonl(os, snap.u); }, result);
}

const std::vector<std::string> kMonitorColumns{
    "U>=C0*tau", "d2U>=C2*tau^-(p+1)*U^p", "U>=C1'*tau*log(tau)", "E increasing",
    "(dU)^2>=C3*tau^-(p+1)*U^(p+1)", "U>=C'*tau^(d+1)"};

SummaryRow base_row(const ExperimentConfig& cfg) {
  SummaryRow row;
  row.config_hash = config_hash(cfg);
  row.mode = to_string(cfg.mode);
  row.d = cfg.d;
  row.p = cfg.p;
  row.delta = cfg.delta;
  row.regime = exponent_regime(cfg.d, cfg.p);
  for (const char* c : {"C_T", "C2", "C0", "C1_prime", "C3", "C_prime"}) row.constants.emplace_back(c, std::nullopt);
  for (const auto& m : kMonitorColumns) row.onsets.emplace_back(m, std::nullopt);
  return row;
}

template <typename Scalar>
ExperimentResult run_lattice(const ExperimentConfig& cfg) {
  ExperimentResult result;
  const OutputDir dir(cfg.output_dir);
  auto [d0, d1] = build_initial_data(cfg);
  Field<Scalar> u0 = field_cast<Scalar>(d0);
  Field<Scalar> u1 = field_cast<Scalar>(d1);
  const SchemeParams params = cfg.scheme();
  RunOptions opts;
  opts.max_steps = cfg.max_steps;
  opts.record_every = cfg.record_every;
  opts.K = cfg.K;
  opts.snapshot_every = cfg.snapshot_every;
  result.warnings = cfg.warnings;

  SummaryRow row = base_row(cfg);
  if (cfg.mode == Mode::naive) {
    const auto out = run_naive(u0, u1, SchemeParams{cfg.d, cfg.p, cfg.delta, cfg.lambda, false}, opts);
    write_run_files(dir, out, std::nullopt, result);
    result.status = out.status_name();
    row.status = result.status;
    result.rows.push_back(row);
    return result;
  }

  if (params.scaled) {
    try {
      u0 = to_scaled(u0, params);
      u1 = to_scaled(u1, params);
    } catch (const std::domain_error& e) {
      throw ConfigError(std::string("scaled: ") + e.what() + "; use scaled=false or float64 arithmetic");
    }
  }
  const Coord K = cfg.K.value_or(default_support_bound(u0, u1));
  const auto hyp = validate_hypotheses(u0, u1, K, params);
  if (!hyp.overall) result.warnings.push_back("hypotheses: " + hyp.describe());

  auto out = run_simulation(u0, u1, params, opts);
  std::vector<DiagnosticsRecord> pre;
  const long tau0 = out.blowup() ? out.blowup()->tau0 : std::numeric_limits<long>::max();
  for (const auto& r : out.trajectory)
    if (r.tau < tau0) pre.push_back(r);

  std::optional<std::string> monitor;
  if (pre.size() >= 10) {
    const auto consts = fit_constants(pre, cfg.d, cfg.p, cfg.tail_fraction);
    attach_energy(out.trajectory, consts);
    attach_energy(pre, consts);
    const auto report = monitor_inequalities(pre, consts);
    monitor = monitor_report_json(report, consts);
    row.constants = {{"C_T", consts.C_T}, {"C2", consts.C2}, {"C0", consts.C0},
                     {"C1_prime", consts.C1_prime}, {"C3", consts.C3}, {"C_prime", consts.C_prime}};
    for (auto& [name, onset] : row.onsets) onset = report.get(name).onset_tau;
  } else {
    monitor = json{{"note", "fewer than 10 pre-blow-up records; constants not fitted"},
                   {"records", pre.size()}}.dump(2);
  }
  write_run_files(dir, out, monitor, result);

  result.status = out.status_name();
  if (auto* b = out.blowup()) {
    result.tau0 = b->tau0;
    result.point = b->point;
  }
  row.status = result.status;
  row.tau0 = result.tau0;
  result.rows.push_back(row);
  return result;
}

template <typename Scalar>
ExperimentResult run_uniform(const ExperimentConfig& cfg) {
  ExperimentResult result;
  const OutputDir dir(cfg.output_dir);
  const auto traj = iterate_uniform(from_double<Scalar>(*cfg.g), cfg.p, cfg.delta, cfg.max_steps);
  UniformTrajectory<double> as_double{*cfg.g, cfg.p, cfg.delta, {}, traj.blowup_step, traj.overflow};
  for (const auto& u : traj.values) as_double.values.push_back(to_double(u));
  dir.write("uniform.csv", [&](std::ostream& os) { write_uniform_csv(os, as_double); }, result);

  json status;
  if (traj.blowup_step) status = {{"status", "blowup"}, {"tau0", *traj.blowup_step}};
  else if (traj.overflow) status = {{"status", "overflow"}, {"tau", static_cast<long>(traj.values.size())}};
  else status = {{"status", "budget"}, {"final_tau", static_cast<long>(traj.values.size()) - 1}};
  status["linear_lower_bound"] = linear_lower_bound_check(traj);
  dir.write("status.json", [&](std::ostream& os) { os << status.dump() << '\n'; }, result);

  result.status = status["status"].get<std::string>();
  result.tau0 = traj.blowup_step;
  SummaryRow row = base_row(cfg);
  row.status = result.status;
  row.tau0 = result.tau0;
  result.rows.push_back(row);
  return result;
}

ExperimentResult run_check(const ExperimentConfig& cfg) {
  ExperimentResult result;
  const OutputDir dir(cfg.output_dir);
  const std::vector<SuiteSummary> suites{jensen_suite(cfg.seed, cfg.cases),
                                         convexity_suite({1.1, 1.5, 2.0, 3.0}, 1e-3),
                                         phi_suite({1.1, 2.0, 3.0}, 1e-4),
                                         monotonicity_suite({1.1, 1.5, 2.0, 3.0}, 1e-3)};
  dir.write("check.jsonl", [&](std::ostream& os) {
    for (const auto& s : suites) os << suite_json(s) << '\n';
  }, result);
  result.status = "done";
  SummaryRow row = base_row(cfg);
  row.status = result.status;
  result.rows.push_back(row);
  return result;
}

ExperimentResult run_consistency(const ExperimentConfig& cfg) {
  ExperimentResult result;
  const OutputDir dir(cfg.output_dir);
  const auto points = default_sample_points(cfg.d);
  json slopes = json::object();
  std::ostringstream csv;
  csv << "sampler,d,p,delta,max_residual\n";
  for (const auto& s : sampler_catalog(cfg.d)) {
    const auto study = refinement_study(s, cfg.deltas, points, cfg.p);
    for (std::size_t i = 0; i < study.deltas.size(); ++i)
      csv << s.name << ',' << cfg.d << ',' << format_double(cfg.p) << ',' << format_double(study.deltas[i]) << ','
          << format_double(study.max_residuals[i]) << '\n';
    slopes[s.name] = study.exact ? json("exact") : (study.slope ? json(*study.slope) : json());
  }
  dir.write("consistency.csv", [&](std::ostream& os) { os << csv.str(); }, result);
  dir.write("consistency.json", [&](std::ostream& os) {
    os << json{{"d", cfg.d}, {"p", cfg.p}, {"deltas", cfg.deltas}, {"slopes", slopes}}.dump(2) << '\n';
  }, result);
  result.status = "done";
  SummaryRow row = base_row(cfg);
  row.status = result.status;
  result.rows.push_back(row);
  return result;
}

ExperimentResult run_single(const ExperimentConfig& cfg);

ExperimentResult run_sweep(const ExperimentConfig& cfg) {
  std::vector<double> ps = cfg.sweep_p;
  if (ps.empty()) {
    ps = {1.5, 2.0};
    if (cfg.d == 1) ps.push_back(3.0);
    else {
      ps.push_back(kato_exponent(cfg.d));
      ps.push_back(critical_exponent(cfg.d));
      ps.push_back(critical_exponent(cfg.d) + 0.5);
    }
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  }
  const std::vector<double> deltas = cfg.sweep_delta.empty() ? std::vector<double>{cfg.delta} : cfg.sweep_delta;

  std::vector<ExperimentConfig> cells;
  for (double p : ps)
    for (double delta : deltas) {
      ExperimentConfig c = cfg;
      c.mode = Mode::run;
      c.p = p;
      c.delta = delta;
      c.output_dir = (fs::path(cfg.output_dir) / ("cell_" + std::to_string(cells.size()))).string();
      c.validate();
      cells.push_back(std::move(c));
    }

  // Cells are independent and write to their own directories; results are
  // collected in input order.
  std::vector<ExperimentResult> results(cells.size());
  const std::size_t workers = std::max(1U, std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < cells.size(); start += workers) {
    std::vector<std::future<ExperimentResult>> batch;
    for (std::size_t i = start; i < std::min(cells.size(), start + workers); ++i)
      batch.push_back(std::async(workers == 1 ? std::launch::deferred : std::launch::async,
                                 [&cells, i] { return run_single(cells[i]); }));
    for (std::size_t k = 0; k < batch.size(); ++k) results[start + k] = batch[k].get();
  }

  ExperimentResult result;
  const OutputDir dir(cfg.output_dir);
  for (std::size_t i = 0; i < results.size(); ++i) {
    for (auto& row : results[i].rows) {
      row.mode = "sweep";
      result.rows.push_back(row);
    }
    for (const auto& f : results[i].files) result.files.push_back("cell_" + std::to_string(i) + "/" + f);
    for (const auto& w : results[i].warnings) result.warnings.push_back("cell_" + std::to_string(i) + ": " + w);
  }
  result.status = "done";
  dir.write("summary.csv", [&](std::ostream& os) { emit_summary(os, result.rows); }, result);
  return result;
}

ExperimentResult run_single(const ExperimentConfig& cfg) {
  const bool rational = cfg.arithmetic == Arithmetic::rational;
  switch (cfg.mode) {
    case Mode::run:
    case Mode::naive:
      return rational ? run_lattice<Rational>(cfg) : run_lattice<double>(cfg);
    case Mode::uniform:
      return rational ? run_uniform<Rational>(cfg) : run_uniform<double>(cfg);
    case Mode::check:
      return run_check(cfg);
    case Mode::consistency:
      return run_consistency(cfg);
    case Mode::sweep:
      return run_sweep(cfg);
  }
  throw ConfigError("mode: unsupported");
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentConfig checked = cfg;
  checked.validate();
  auto result = run_single(checked);
  if (checked.mode != Mode::sweep) {
    const OutputDir dir(checked.output_dir);
    dir.write("summary.csv", [&](std::ostream& os) { emit_summary(os, result.rows); }, result);
  }
  return result;
}

void emit_summary(std::ostream& os, const std::vector<SummaryRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("summary needs at least one outcome");
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  os << "config_hash,mode,d,p,delta,status,tau0,regime";
  for (const auto& [name, value] : rows.front().constants) os << ',' << name;
  for (const auto& [name, value] : rows.front().onsets) os << ',' << quote("onset:" + name);
  os << '\n';
  for (const auto& r : rows) {
    os << r.config_hash << ',' << r.mode << ',' << r.d << ',' << format_double(r.p) << ',' << format_double(r.delta)
       << ',' << r.status << ',' << (r.tau0 ? std::to_string(*r.tau0) : "") << ',' << quote(r.regime);
    for (const auto& [name, value] : r.constants) os << ',' << (value ? format_double(*value) : "");
    for (const auto& [name, value] : r.onsets) os << ',' << (value ? std::to_string(*value) : "");
    os << '\n';
  }
}

}  // namespace dwave
