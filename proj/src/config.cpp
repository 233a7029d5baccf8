#include "hardnet/config.hpp"

namespace hardnet {

Predicate ExperimentConfig::parsed_predicate() const {
  return Predicate::parse(predicate);
}

void ExperimentConfig::validate() const {
  Predicate p;
  try {
    p = parsed_predicate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (k != 0 && k != p.k)
    throw ConfigError("config: k=" + std::to_string(k) +
                      " does not match predicate arity " + std::to_string(p.k));
  if (n < 2) throw ConfigError("config: need n >= 2");
  if (p.k > n) throw ConfigError("config: need k <= n");
  if (trials < 1) throw ConfigError("config: need trials >= 1");
  if (holdout_cap < 1) throw ConfigError("config: need holdout_cap >= 1");
  if (tau_policy == TauPolicy::Explicit && tau_explicit < 0.0)
    throw ConfigError("config: explicit tau must be >= 0");
  if (threshold_policy == ThresholdPolicy::Explicit && threshold_explicit <= 0.0)
    throw ConfigError("config: explicit threshold must be > 0");
  if (jobs < 1) throw ConfigError("config: need jobs >= 1");
  if (s <= 1.0) throw ConfigError("config: stretch exponent s must be > 1");
}

namespace {

OracleMode parse_mode(const std::string& s) {
  if (s == "theorem1") return OracleMode::Theorem1;
  if (s == "theorem2") return OracleMode::Theorem2;
  throw ConfigError("config: mode must be theorem1 or theorem2");
}

TauPolicy parse_tau_policy(const std::string& s) {
  if (s == "paper_formula") return TauPolicy::PaperFormula;
  if (s == "explicit") return TauPolicy::Explicit;
  throw ConfigError("config: tau/omega policy must be paper_formula or explicit");
}

ThresholdPolicy parse_threshold_policy(const std::string& s) {
  if (s == "paper") return ThresholdPolicy::Paper;
  if (s == "midpoint") return ThresholdPolicy::Midpoint;
  if (s == "explicit") return ThresholdPolicy::Explicit;
  throw ConfigError("config: threshold policy must be paper, midpoint or explicit");
}

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  try {
    if (j.contains("n")) cfg.n = j.at("n").get<int>();
    if (j.contains("k")) cfg.k = j.at("k").get<int>();
    if (j.contains("predicate")) cfg.predicate = j.at("predicate").get<std::string>();
    if (j.contains("mode")) cfg.mode = parse_mode(j.at("mode").get<std::string>());
    if (j.contains("s")) cfg.s = j.at("s").get<double>();
    if (j.contains("m")) cfg.m = j.at("m").get<std::size_t>();
    if (j.contains("holdout_cap")) cfg.holdout_cap = j.at("holdout_cap").get<std::size_t>();
    if (j.contains("tau_policy"))
      cfg.tau_policy = parse_tau_policy(j.at("tau_policy").get<std::string>());
    if (j.contains("tau")) {
      cfg.tau_policy = TauPolicy::Explicit;
      cfg.tau_explicit = j.at("tau").get<double>();
    }
    if (j.contains("omega_policy"))
      cfg.omega_policy = parse_tau_policy(j.at("omega_policy").get<std::string>());
    if (j.contains("omega")) {
      cfg.omega_policy = TauPolicy::Explicit;
      cfg.omega_explicit = j.at("omega").get<double>();
    }
    if (j.contains("threshold_policy"))
      cfg.threshold_policy =
          parse_threshold_policy(j.at("threshold_policy").get<std::string>());
    if (j.contains("threshold")) {
      cfg.threshold_policy = ThresholdPolicy::Explicit;
      cfg.threshold_explicit = j.at("threshold").get<double>();
    }
    if (j.contains("learner")) cfg.learner = j.at("learner").get<std::string>();
    if (j.contains("rf_width")) cfg.rf_width = j.at("rf_width").get<int>();
    if (j.contains("rf_ridge")) cfg.rf_ridge = j.at("rf_ridge").get<double>();
    if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("epsilon")) cfg.epsilon = j.at("epsilon").get<double>();
    if (j.contains("jobs")) cfg.jobs = j.at("jobs").get<int>();
    if (j.contains("dense")) cfg.dense = j.at("dense").get<bool>();
    if (j.contains("strict")) cfg.strict = j.at("strict").get<bool>();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["n"] = cfg.n;
  j["k"] = cfg.k == 0 ? cfg.parsed_predicate().k : cfg.k;
  j["predicate"] = cfg.predicate;
  j["mode"] = cfg.mode == OracleMode::Theorem1 ? "theorem1" : "theorem2";
  j["s"] = cfg.s;
  j["m"] = cfg.m;
  j["holdout_cap"] = cfg.holdout_cap;
  j["tau_policy"] =
      cfg.tau_policy == TauPolicy::PaperFormula ? "paper_formula" : "explicit";
  if (cfg.tau_policy == TauPolicy::Explicit) j["tau"] = cfg.tau_explicit;
  j["omega_policy"] =
      cfg.omega_policy == TauPolicy::PaperFormula ? "paper_formula" : "explicit";
  if (cfg.omega_policy == TauPolicy::Explicit) j["omega"] = cfg.omega_explicit;
  switch (cfg.threshold_policy) {
    case ThresholdPolicy::Paper: j["threshold_policy"] = "paper"; break;
    case ThresholdPolicy::Midpoint: j["threshold_policy"] = "midpoint"; break;
    case ThresholdPolicy::Explicit:
      j["threshold_policy"] = "explicit";
      j["threshold"] = cfg.threshold_explicit;
      break;
  }
  j["learner"] = cfg.learner;
  j["rf_width"] = cfg.rf_width;
  j["rf_ridge"] = cfg.rf_ridge;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["epsilon"] = cfg.effective_epsilon();
  j["jobs"] = cfg.jobs;
  j["dense"] = cfg.dense;
  j["strict"] = cfg.strict;
  return j;
}

}  // namespace hardnet
