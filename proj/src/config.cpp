#include "config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>

namespace xfbci {

const char* kOutDirEnvVar = "XFBCI_OUT_DIR";

Method parse_method(const std::string& name) {
  if (name == "xfbci") return Method::Xfbci;
  if (name == "individual") return Method::Individual;
  if (name == "ditto") return Method::Ditto;
  if (name == "central") return Method::Central;
  throw Error(Errc::config, "unknown method '" + name + "'");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::Xfbci: return "xfbci";
    case Method::Individual: return "individual";
    case Method::Ditto: return "ditto";
    case Method::Central: return "central";
  }
  throw Error(Errc::config, "unknown method");
}

void RunConfig::validate() const {
  require(replications >= 1, Errc::config, "replications must be >= 1");
  require(jobs >= 1, Errc::config, "jobs must be >= 1");
  ep.validate();
  ditto.validate();
  if (command == Command::Analyze) {
    require(!data_paths.empty(), Errc::config, "analyze: no input data files");
    require(!outcome_col.empty(), Errc::config, "analyze: outcome column required");
    if (method != Method::Individual)
      require(data_paths.size() >= 2, Errc::config,
              "analyze: federated methods need at least 2 client files");
  }
}

namespace {

struct CaseDefaults {
  int rounds;
  double lr;
  int steps;
  int burn_in;
  double batch;
  double alpha;
  // ditto: rounds, local_lr, global_lr, local_steps, global_steps
  int d_rounds;
  double d_llr, d_glr;
  int d_lsteps, d_gsteps;
};

CaseDefaults defaults_for(CaseId id) {
  switch (id) {
    case CaseId::C1:      return {20, 0.05, 700, 100, 0.9, 3.0, 20, 0.005, 0.005, 500, 500};
    case CaseId::C2:      return {30, 0.001, 700, 100, 0.9, 30.0, 30, 0.001, 0.001, 400, 400};
    case CaseId::C3:      return {30, 0.001, 700, 100, 0.9, 30.0, 30, 0.002, 0.001, 400, 400};
    case CaseId::C4:      return {30, 0.002, 700, 100, 0.8, 10.0, 40, 0.01, 0.02, 400, 400};
    case CaseId::C5:      return {30, 0.002, 700, 100, 0.8, 10.0, 40, 0.01, 0.01, 500, 500};
    case CaseId::C6:      return {40, 0.001, 600, 100, 0.8, 5.0, 30, 0.01, 0.01, 400, 400};
    case CaseId::C7:      return {40, 0.001, 600, 100, 0.8, 5.0, 30, 0.01, 0.01, 400, 400};
    case CaseId::Extreme: return {40, 0.002, 700, 100, 0.8, 10.0, 40, 0.01, 0.01, 500, 500};
  }
  throw Error(Errc::config, "unknown case id");
}

// Real-data (analyze) defaults: moderate pooling at O(1) covariate scales.
constexpr CaseDefaults kAnalyzeDefaults = {20, 0.001, 700, 100, 0.9, 3.0,
                                           20, 0.005, 0.005, 400, 400};

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double out = std::stod(v, &used);
    require(used == v.size(), Errc::config, "");
    return out;
  } catch (...) {
    throw Error(Errc::config, "config: '" + key + "' wants a number, got '" + v + "'");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    long long out = std::stoll(v, &used);
    require(used == v.size(), Errc::config, "");
    return out;
  } catch (...) {
    throw Error(Errc::config, "config: '" + key + "' wants an integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "on") return true;
  if (v == "0" || v == "false" || v == "off") return false;
  throw Error(Errc::config, "config: '" + key + "' wants a boolean, got '" + v + "'");
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

}  // namespace

void apply_case_defaults(RunConfig& cfg) {
  CaseDefaults d = cfg.command == Command::Analyze ? kAnalyzeDefaults
                                                   : defaults_for(cfg.case_id);
  cfg.ep.rounds = d.rounds;
  cfg.ep.sgld.learning_rate = d.lr;
  cfg.ep.sgld.steps = d.steps;
  cfg.ep.sgld.burn_in = d.burn_in;
  cfg.ep.sgld.batch_fraction = d.batch;
  cfg.ep.alpha = d.alpha;
  cfg.ditto.rounds = d.d_rounds;
  cfg.ditto.local_lr = d.d_llr;
  cfg.ditto.global_lr = d.d_glr;
  cfg.ditto.local_steps = d.d_lsteps;
  cfg.ditto.global_steps = d.d_gsteps;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Errc::config, "cannot open config file '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    require(eq != std::string::npos, Errc::config,
            path + ":" + std::to_string(lineno) + ": expected key=value");
    kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return kv;
}

RunConfig build_config(const std::vector<std::pair<std::string, std::string>>& pairs) {
  RunConfig cfg;

  // First pass decides the command and case so defaults resolve before overrides.
  for (const auto& [key, value] : pairs) {
    if (key == "command") {
      if (value == "simulate") cfg.command = Command::Simulate;
      else if (value == "analyze") cfg.command = Command::Analyze;
      else if (value == "dump") cfg.command = Command::Dump;
      else throw Error(Errc::config, "unknown command '" + value + "'");
    } else if (key == "case") {
      cfg.case_id = parse_case(value);
    }
  }
  apply_case_defaults(cfg);

  if (const char* env = std::getenv(kOutDirEnvVar); env && *env) cfg.out_dir = env;

  for (const auto& [key, value] : pairs) {
    if (key == "command" || key == "case") continue;
    if (key == "method") cfg.method = parse_method(value);
    else if (key == "reps") cfg.replications = static_cast<int>(to_int(key, value));
    else if (key == "seed") cfg.master_seed = static_cast<std::uint64_t>(to_int(key, value));
    else if (key == "ep.rounds") cfg.ep.rounds = static_cast<int>(to_int(key, value));
    else if (key == "ep.damping") cfg.ep.damping = to_double(key, value);
    else if (key == "ep.alpha") cfg.ep.alpha = to_double(key, value);
    else if (key == "ep.cov_mode") {
      if (value == "jitter") cfg.ep.cov_mode = CovMode::SampleCovPlusAlphaJitter;
      else if (value == "scaled_identity") cfg.ep.cov_mode = CovMode::ScaledIdentityAlpha;
      else throw Error(Errc::config, "ep.cov_mode wants 'jitter' or 'scaled_identity'");
    } else if (key == "ep.tau0") cfg.ep.prior_precision = to_double(key, value);
    else if (key == "ep.psd_floor") cfg.ep.psd_floor = to_double(key, value);
    else if (key == "ep.warm_start") cfg.ep.warm_start = to_bool(key, value);
    else if (key == "sgld.lr") cfg.ep.sgld.learning_rate = to_double(key, value);
    else if (key == "sgld.steps") cfg.ep.sgld.steps = static_cast<int>(to_int(key, value));
    else if (key == "sgld.burn_in") cfg.ep.sgld.burn_in = static_cast<int>(to_int(key, value));
    else if (key == "sgld.batch") cfg.ep.sgld.batch_fraction = to_double(key, value);
    else if (key == "sgld.noise_is_sd") cfg.ep.sgld.noise_is_sd = to_bool(key, value);
    else if (key == "sgld.lr_decay") cfg.ep.sgld.lr_decay = to_double(key, value);
    else if (key == "ditto.rounds") cfg.ditto.rounds = static_cast<int>(to_int(key, value));
    else if (key == "ditto.local_lr") cfg.ditto.local_lr = to_double(key, value);
    else if (key == "ditto.global_lr") cfg.ditto.global_lr = to_double(key, value);
    else if (key == "ditto.local_steps") cfg.ditto.local_steps = static_cast<int>(to_int(key, value));
    else if (key == "ditto.global_steps") cfg.ditto.global_steps = static_cast<int>(to_int(key, value));
    else if (key == "ditto.lambda_prox") cfg.ditto.lambda_prox = to_double(key, value);
    else if (key == "ditto.batch") cfg.ditto.batch_fraction = to_double(key, value);
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "data") {
      cfg.data_paths.clear();
      std::size_t start = 0;
      while (start <= value.size()) {
        std::size_t comma = value.find(',', start);
        std::string item = value.substr(start, comma == std::string::npos ? comma : comma - start);
        if (!trim(item).empty()) cfg.data_paths.push_back(trim(item));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    } else if (key == "outcome") cfg.outcome_col = value;
    else if (key == "treatment") cfg.treatment_col = value;
    else if (key == "add_intercept") cfg.add_intercept = to_bool(key, value);
    else if (key == "binarize") {
      if (value == "median") cfg.binarize = BinarizeRule::Median;
      else if (value == "threshold") cfg.binarize = BinarizeRule::Threshold;
      else throw Error(Errc::config, "binarize wants 'median' or 'threshold'");
    } else if (key == "threshold") cfg.threshold = to_double(key, value);
    else if (key == "jobs") cfg.jobs = static_cast<int>(to_int(key, value));
    else if (key == "telemetry") cfg.telemetry = to_bool(key, value);
    else if (key == "ehd") cfg.dump_ehd = to_bool(key, value);
    else if (key == "inject_c") cfg.inject_c = to_double(key, value);
    else if (key == "inject_target") cfg.inject_target = static_cast<int>(to_int(key, value));
    else throw Error(Errc::config, "unknown config key '" + key + "'");
  }

  if (cfg.out_dir.empty()) cfg.out_dir = ".";
  cfg.validate();
  return cfg;
}

}  // namespace xfbci
