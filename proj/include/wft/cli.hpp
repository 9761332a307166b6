#pragma once

#include <string>
#include <vector>

#include "wft/io.hpp"

namespace wft {

enum ExitCode : int { kExitPass = 0, kExitVerdictFail = 1, kExitInputError = 2, kExitTruncated = 3, kExitInternal = 4 };

// Scalar datum file: {"type": "riemann", "uL", "uR", "x0"} | {"type": "steps", "breakpoints", "values"}
// | {"type": "constant", "value"} | {"type": "fourier", "a", "b"}; optional "flux": {"k": k} for k z^2.
ScalarProfile scalar_profile_from_json(const json& j);

// "lo:hi:step" (inclusive, round((hi - lo) / step) + 1 points) or a comma list.
std::vector<Real> parse_grid(const std::string& s);
// "1,2,5-9"; throws DomainError on duplicates.
std::vector<std::uint64_t> parse_seeds(const std::string& s);

struct RunConfig {
  DatumSpec datum;
  json ft_overrides = json::object();
  int J_max = -1;  // < 0: 5 for datum Z, 3 otherwise
  bool extended_precision = false;
  std::optional<Real> adversarial_strength;  // calibrated 3-rarefaction inserts
  int adversarial_count = 2;
  Real adversarial_lag = Real(1e-6);
  PatternOptions analysis;
};

// {eps, kind, seed, budget, mesh, radius, norm, base, J_max, ft: {...}, precision,
//  adversarial: {strength, count, lag}, analysis: {min_generations, K_cap}}
RunConfig run_config_from_json(const json& j);

struct SimulateResult {
  FTSolution sol;
  ScenarioParams sp;
  json extra;  // kind, seed, inserts, datum diagnostics
};
SimulateResult simulate_config(const RunConfig& cfg);

int run_cli(int argc, char** argv);
int run_cli(const std::vector<std::string>& args);  // args exclude the program name

}  // namespace wft
