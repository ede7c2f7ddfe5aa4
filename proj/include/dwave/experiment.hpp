#pragma once

// Experiment configuration and orchestration for the command-line tool.
//
// A config document is a flat JSON object; only `initial_data` nests:
//   {"mode": "run", "d": 2, "p": 3, "delta": 0.5,
//    "initial_data": {"kind": "point", "u0_value": 0, "u1_value": 1}}

#include "dwave/lattice.hpp"
#include "dwave/scheme.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dwave {

enum class Mode { run, naive, uniform, check, consistency, sweep };
enum class Arithmetic { float64, rational };

std::string to_string(Mode m);
Mode parse_mode(std::string_view s);

/// Raised for invalid configuration documents; the message names the key path.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InitialData {
  enum class Kind { ball, point, file };
  Kind kind = Kind::point;
  Coord radius = 1;        // ball
  double u0_value = 0.0;   // ball, point
  double u1_value = 1.0;   // ball, point
  std::string u0_path;     // file; empty means the zero field
  std::string u1_path;     // file
};

struct ExperimentConfig {
  Mode mode = Mode::run;
  int d = 1;
  double p = 2.0;
  double delta = 0.5;
  std::optional<Coord> K;
  std::optional<double> g;       // uniform mode
  std::optional<double> lambda;  // naive scheme; defaults to 1/d
  bool scaled = true;            // run the proposed scheme in scaled variables
  InitialData initial_data;
  long max_steps = 100000;
  long record_every = 1;
  long snapshot_every = 0;
  Arithmetic arithmetic = Arithmetic::float64;
  std::uint64_t seed = 0;
  std::string output_dir = ".";
  double tail_fraction = 0.5;
  long cases = 100000;                             // check mode
  std::vector<double> deltas{0.04, 0.02, 0.01};    // consistency mode
  std::vector<double> sweep_p;                     // sweep mode; empty picks a default grid
  std::vector<double> sweep_delta;                 // sweep mode; empty means {delta}

  std::vector<std::string> warnings;  // hypothesis violations; never fatal

  SchemeParams scheme() const;
  /// Re-validate after programmatic edits (CLI overrides); refreshes warnings.
  void validate();
};

ExperimentConfig parse_config(std::string_view text);

/// Canonical JSON form (sorted keys), the input to config hashing.
std::string config_to_json(const ExperimentConfig& cfg);
std::string config_hash(const ExperimentConfig& cfg);

struct SummaryRow {
  std::string config_hash;
  std::string mode;
  int d = 1;
  double p = 0.0;
  double delta = 0.0;
  std::string status;
  std::optional<long> tau0;
  std::string regime;
  std::vector<std::pair<std::string, std::optional<double>>> constants;
  std::vector<std::pair<std::string, std::optional<long>>> onsets;
};

struct ExperimentResult {
  std::string status;  // blowup | budget | overflow | done
  std::optional<long> tau0;
  std::optional<LatticePoint> point;
  std::vector<std::string> files;  // relative to output_dir
  std::vector<SummaryRow> rows;
  std::vector<std::string> warnings;
};

/// Run `cfg`, writing every artifact under cfg.output_dir. Throws ConfigError
/// for configurations that cannot run and std::runtime_error for IO failures.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// One CSV row per outcome, in input order.
void emit_summary(std::ostream& os, const std::vector<SummaryRow>& rows);

/// Initial slices (u0, u1) in physical variables.
std::pair<Field<double>, Field<double>> build_initial_data(const ExperimentConfig& cfg);

/// Label for sweep cells relative to the theorem's exponent range and p_c(d).
std::string exponent_regime(int d, double p);

}  // namespace dwave
