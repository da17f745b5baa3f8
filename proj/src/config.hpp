#pragma once

#include <map>
#include <string>
#include <vector>

#include "baselines.hpp"
#include "causal.hpp"
#include "ep.hpp"
#include "synth.hpp"

namespace xfbci {

enum class Command { Simulate, Analyze, Dump };
enum class Method { Xfbci, Individual, Ditto, Central };

Method parse_method(const std::string& name);
std::string method_name(Method m);

struct RunConfig {
  Command command = Command::Simulate;
  CaseId case_id = CaseId::C1;
  Method method = Method::Xfbci;
  int replications = 10;
  std::uint64_t master_seed = 7;

  EpConfig ep;        // carries the SGLD table defaults for the chosen case
  DittoConfig ditto;

  // io
  std::string out_dir;                  // resolved: flag > config > env > "."
  std::vector<std::string> data_paths;  // analyze inputs, one CSV per client
  std::string outcome_col;
  std::string treatment_col;  // empty = every non-outcome variable in turn
  bool add_intercept = false;
  BinarizeRule binarize = BinarizeRule::Median;
  double threshold = 0.0;

  int jobs = 1;
  bool telemetry = false;

  // dump extras: write the bundled real-data analog instead of a case world;
  // inject_target >= 0 switches to the injected-effect variant.
  bool dump_ehd = false;
  double inject_c = 0.0;
  int inject_target = -1;

  void validate() const;
};

// Case defaults (rounds, lr, steps, burn-in, batch fraction, alpha and the
// Ditto schedule) keyed by case id; `alpha` is this artifact's calibrated
// default, everything else follows the appendix tables.
void apply_case_defaults(RunConfig& cfg);

// Flat key=value lines; '#' comments; later assignments to a key win. Key
// validity is checked by build_config, not here.
std::map<std::string, std::string> parse_config_file(const std::string& path);

// Build a RunConfig from ordered key=value pairs (config file entries first,
// then command-line overrides). Resolution: per-case defaults are applied for
// whatever the pairs leave unset.
RunConfig build_config(const std::vector<std::pair<std::string, std::string>>& pairs);

// Name of the env var consulted for the default output directory.
extern const char* kOutDirEnvVar;

}  // namespace xfbci
