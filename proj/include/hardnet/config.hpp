#pragma once

#include <cstdint>
#include <string>

#include "hardnet/oracle.hpp"

namespace hardnet {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TauPolicy { PaperFormula, Explicit };
enum class ThresholdPolicy { Paper, Midpoint, Explicit };

struct ExperimentConfig {
  int n = 50;
  int k = 0;  // 0 = take the predicate's arity
  std::string predicate = "xormaj:2:3";
  OracleMode mode = OracleMode::Theorem1;
  double s = 2.0;  // stretch exponent, informational
  std::size_t m = 0;  // learner sample budget
  std::size_t holdout_cap = 10000;
  TauPolicy tau_policy = TauPolicy::PaperFormula;
  double tau_explicit = 0.0;
  TauPolicy omega_policy = TauPolicy::PaperFormula;
  double omega_explicit = 0.0;
  ThresholdPolicy threshold_policy = ThresholdPolicy::Paper;
  double threshold_explicit = 0.0;
  std::string learner = "oracle";  // oracle | zero | random-features
  int rf_width = 128;
  double rf_ridge = 1e-8;
  int trials = 1;
  std::uint64_t seed = 1;
  double epsilon = 0.0;  // 0 = default 1/n
  int jobs = 1;
  bool dense = false;   // force dense padding even for padding-free learners
  bool strict = false;  // regime warnings become failures

  Predicate parsed_predicate() const;
  double effective_epsilon() const { return epsilon > 0.0 ? epsilon : 1.0 / n; }
  void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

}  // namespace hardnet
