#pragma once

// Command drivers behind the cvwit executable. Each takes a JSON config,
// fills in every default it uses (so the config becomes the resolved record
// embedded in the output), and returns the output document as text.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cvwit/channels.hpp"
#include "cvwit/monotones.hpp"

namespace cvwit::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kTruncationError = 3, kInvariantError = 4 };

struct Overrides {
  std::optional<int> cutoff;
  std::optional<std::vector<std::uint64_t>> seeds;
  std::optional<std::size_t> budget;
};

/// Reads the config file (empty path: {}) and applies flag overrides.
nlohmann::json load_config(const std::string& path, const Overrides& o);

std::string cmd_wigner(nlohmann::json& cfg);
std::string cmd_negativity_depth(nlohmann::json& cfg);
std::string cmd_loss_sweep(nlohmann::json& cfg);
std::string cmd_gkp_sweep(nlohmann::json& cfg);
std::string cmd_pure_bounds(nlohmann::json& cfg);
std::string cmd_activate(nlohmann::json& cfg);
std::string cmd_boundary_mix(nlohmann::json& cfg);
std::string cmd_property_suite(nlohmann::json& cfg);

/// Builds a state from a spec such as {"kind": "fock", "n": 1, "channels": [...]}.
DensityMatrix build_state(nlohmann::json& spec, FockCutoff cutoff);
PureState build_pure_state(nlohmann::json& spec, FockCutoff cutoff);

/// One row of the GKP sweep.
struct GkpRow {
  double db = 0.0;
  double epsilon = 0.0;
  int cutoff = 0;
  double e_in = 0.0;
  double e_out = 0.0;
  double infidelity = 0.0;
  double leakage = 0.0;
};

struct GkpSweepConfig {
  std::vector<double> db;
  double eta = 0.9;
  bool ec = true;
  std::optional<double> ancilla_epsilon;  // default: same as the data
  EcQuadrature quadrature = EcQuadrature::Both;
  bool explicit_two_mode = false;  // materialize the two-mode state (small cutoffs only)
  std::size_t budget = kDefaultProductBudget;
  GkpLogical logical = GkpLogical::Zero;
  int fixed_cutoff = 0;  // 0: smallest cutoff passing tail_guard, per row
  double tail_guard = 1e-6;
  DepthSearchConfig search{2.5, 40, 64, 5, 1e-8, 200};
};

std::vector<GkpRow> gkp_sweep(const GkpSweepConfig& cfg);

/// Parses argv, runs the subcommand, maps errors to exit codes.
int run(int argc, char** argv);

}  // namespace cvwit::cli
