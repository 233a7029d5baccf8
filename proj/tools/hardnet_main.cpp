#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "hardnet/verify.hpp"

namespace {

using namespace hardnet;

std::uint64_t env_seed_or(std::uint64_t fallback) {
  if (const char* env = std::getenv("HARDNET_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ConfigError("HARDNET_SEED is not an integer");
    }
  }
  return fallback;
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw ConfigError("cannot open output file " + path);
  return file;
}

Bits parse_x(const std::string& s, int n) {
  const Bits x = parse_bits(s);
  if (x.size() != static_cast<std::size_t>(n))
    throw ConfigError("--x must have exactly n bits");
  return x;
}

// Binds the shared experiment options to a subcommand. Values set on the
// command line win over the config file.
struct CfgBinder {
  ExperimentConfig cli;
  std::string config_path;
  std::string mode_str = "theorem1";
  std::string threshold_policy_str;
  double tau = -1.0, omega = -1.0;
  CLI::App* cmd = nullptr;

  void attach(CLI::App* app, bool with_learner_opts = true) {
    cmd = app;
    app->add_option("--config", config_path, "JSON config file");
    app->add_option("--n", cli.n, "seed length n");
    app->add_option("--k", cli.k, "predicate arity (0: from predicate)");
    app->add_option("--predicate", cli.predicate,
                    "xor:K | maj:K | xormaj:A:B | const0:K | const1:K | table:BITS");
    app->add_option("--mode", mode_str)->check(CLI::IsMember({"theorem1", "theorem2"}));
    app->add_option("--s", cli.s, "stretch exponent (informational)");
    if (with_learner_opts) app->add_option("--m", cli.m, "learner sample budget");
    app->add_option("--holdout-cap", cli.holdout_cap);
    app->add_option("--tau", tau, "explicit parameter noise (default: rule)");
    app->add_option("--omega", omega, "explicit input noise (default: rule)");
    app->add_option("--threshold-policy", threshold_policy_str)
        ->check(CLI::IsMember({"paper", "midpoint", "explicit"}));
    app->add_option("--threshold", cli.threshold_explicit);
    app->add_option("--learner", cli.learner)
        ->check(CLI::IsMember({"oracle", "zero", "random-features"}));
    app->add_option("--rf-width", cli.rf_width);
    app->add_option("--rf-ridge", cli.rf_ridge);
    app->add_option("--trials", cli.trials);
    app->add_option("--seed", cli.seed);
    app->add_option("--epsilon", cli.epsilon);
    app->add_option("--jobs", cli.jobs);
    app->add_flag("--dense", cli.dense, "always materialize padding coordinates");
    app->add_flag("--strict", cli.strict, "regime warnings become failures");
  }

  ExperimentConfig resolve(bool validate = true) const {
    ExperimentConfig cfg;
    bool config_has_seed = false;
    bool config_has_predicate = false;
    if (!config_path.empty()) {
      const auto j = load_json_file(config_path);
      cfg = config_from_json(j);
      config_has_seed = j.contains("seed");
      config_has_predicate = j.contains("predicate");
    }
    auto set = [&](const char* name) {
      const auto* opt = cmd->get_option_no_throw(name);
      return opt != nullptr && opt->count() > 0;
    };
    if (set("--n")) cfg.n = cli.n;
    if (set("--k")) cfg.k = cli.k;
    if (set("--predicate")) cfg.predicate = cli.predicate;
    if (set("--mode"))
      cfg.mode = mode_str == "theorem1" ? OracleMode::Theorem1 : OracleMode::Theorem2;
    if (set("--s")) cfg.s = cli.s;
    if (set("--m")) cfg.m = cli.m;
    if (set("--holdout-cap")) cfg.holdout_cap = cli.holdout_cap;
    if (set("--tau")) {
      cfg.tau_policy = TauPolicy::Explicit;
      cfg.tau_explicit = tau;
    }
    if (set("--omega")) {
      cfg.omega_policy = TauPolicy::Explicit;
      cfg.omega_explicit = omega;
    }
    if (set("--threshold-policy")) {
      cfg.threshold_policy = threshold_policy_str == "paper" ? ThresholdPolicy::Paper
                             : threshold_policy_str == "midpoint"
                                 ? ThresholdPolicy::Midpoint
                                 : ThresholdPolicy::Explicit;
    }
    if (set("--threshold")) {
      cfg.threshold_policy = ThresholdPolicy::Explicit;
      cfg.threshold_explicit = cli.threshold_explicit;
    }
    if (set("--learner")) cfg.learner = cli.learner;
    if (set("--rf-width")) cfg.rf_width = cli.rf_width;
    if (set("--rf-ridge")) cfg.rf_ridge = cli.rf_ridge;
    if (set("--trials")) cfg.trials = cli.trials;
    if (set("--seed")) cfg.seed = cli.seed;
    else if (!config_has_seed) cfg.seed = env_seed_or(cfg.seed);
    if (set("--epsilon")) cfg.epsilon = cli.epsilon;
    if (set("--jobs")) cfg.jobs = cli.jobs;
    if (set("--dense")) cfg.dense = cli.dense;
    if (set("--strict")) cfg.strict = cli.strict;
    // --k without an explicit predicate selects the default for that arity
    if (cfg.k != 0 && !set("--predicate") && !config_has_predicate)
      cfg.predicate = Predicate::default_for_arity(cfg.k).name;
    if (validate) cfg.validate();
    return cfg;
  }
};

int cmd_build_net(const ExperimentConfig& cfg, const std::string& x_str,
                  const std::string& out_path) {
  const Predicate p = cfg.parsed_predicate();
  Bits x;
  if (!x_str.empty()) {
    x = parse_x(x_str, cfg.n);
  } else {
    Rng rng = derive_rng(cfg.seed, {tag(Stream::Secret)});
    x.resize(cfg.n);
    for (auto& b : x) b = rng.bernoulli(0.5) ? 1 : 0;
  }
  const ReluNetwork net = cfg.mode == OracleMode::Theorem1
                              ? assemble_depth3_target(p, x, cfg.n)
                              : assemble_depth2_target(p, x, cfg.n);
  const NetworkAudit audit = audit_network(net);
  for (const auto& flag : audit.regime_flags) {
    std::cerr << "regime: " << flag << "\n";
    if (cfg.strict) {
      std::cerr << "failing under --strict\n";
      return 1;
    }
  }
  std::ofstream file;
  open_out(file, out_path) << network_to_json(net).dump() << "\n";
  return 0;
}

int cmd_prg(const ExperimentConfig& cfg, const std::string& kind_str, int m,
            bool no_secret, const std::string& out_path) {
  const Predicate p = cfg.parsed_predicate();
  const ChallengeKind kind =
      kind_str == "random" ? ChallengeKind::Random : ChallengeKind::Pseudorandom;
  Rng rng = derive_rng(cfg.seed, {tag(Stream::Graph)});
  const auto ch = sample_challenge(p, cfg.n, m, kind, rng, !no_secret);
  std::ofstream file;
  open_out(file, out_path) << challenge_to_json(ch).dump() << "\n";
  return 0;
}

int cmd_distinguish(const ExperimentConfig& cfg, const std::string& kind_str,
                    const std::string& out_path) {
  const ChallengeKind kind =
      kind_str == "random" ? ChallengeKind::Random : ChallengeKind::Pseudorandom;
  const auto decisions = run_trials(cfg, kind);
  std::ofstream file;
  std::ostream& out = open_out(file, out_path);
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    nlohmann::json j = decision_to_json(decisions[i]);
    j["trial"] = i;
    j["kind"] = kind_str;
    out << j.dump() << "\n";
  }
  bool regime_warned = false;
  for (const auto& d : decisions) regime_warned |= !d.regime_flags.empty();
  if (regime_warned && cfg.strict) {
    std::cerr << "regime flags present; failing under --strict\n";
    return 1;
  }
  return 0;
}

int cmd_verify(const VerifyOptions& opt, const std::vector<std::string>& only,
               bool strict, const std::string& out_path) {
  std::vector<VerifyReport> reports;
  if (only.empty()) {
    reports = run_verify_suite(opt);
  } else {
    for (const auto& id : only) reports.push_back(run_verify_lemma(id, opt));
  }
  std::ofstream file;
  std::ostream& out = open_out(file, out_path);
  bool fail = false;
  std::cerr << "lemma                     trials   fail  empirical    bound      regime result\n";
  for (const auto& r : reports) {
    out << verify_report_to_json(r).dump() << "\n";
    const bool this_fail = !r.pass || (strict && !r.regime_ok);
    fail |= this_fail;
    char line[160];
    std::snprintf(line, sizeof(line), "%-25s %7ld %6ld  %-10.5g  %-10.5g %-6s %s",
                  r.lemma_id.c_str(), r.trials, r.failures, r.empirical, r.bound,
                  r.regime_ok ? "ok" : "flag", this_fail ? "FAIL" : "pass");
    std::cerr << line << "\n";
  }
  return fail ? 1 : 0;
}

int cmd_report(const std::vector<std::string>& paths) {
  nlohmann::json summary;
  std::map<std::string, std::array<double, 3>> kinds;  // count, verdict1, loss sum
  std::map<std::string, std::array<long, 2>> lemmas;   // pass, fail
  auto consume = [&](std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      if (j.contains("lemma_id")) {
        ++lemmas[j.at("lemma_id").get<std::string>()][j.at("pass").get<bool>() ? 0 : 1];
      } else if (j.contains("verdict")) {
        auto& row = kinds[j.value("kind", "unknown")];
        row[0] += 1.0;
        row[1] += j.at("verdict").get<int>();
        row[2] += j.at("loss").get<double>();
      }
    }
  };
  if (paths.empty()) {
    consume(std::cin);
  } else {
    for (const auto& p : paths) {
      std::ifstream in(p);
      if (!in) throw ConfigError("cannot open " + p);
      consume(in);
    }
  }
  for (const auto& [kind, row] : kinds) {
    summary["decisions"][kind] = {{"trials", static_cast<long>(row[0])},
                                  {"verdict1_rate", row[1] / row[0]},
                                  {"mean_loss", row[2] / row[0]}};
  }
  if (kinds.count("pseudorandom") && kinds.count("random")) {
    const auto& ps = kinds["pseudorandom"];
    const auto& rd = kinds["random"];
    summary["advantage"] = ps[1] / ps[0] - rd[1] / rd[0];
  }
  long fails = 0;
  for (const auto& [id, counts] : lemmas) {
    summary["lemmas"][id] = {{"pass", counts[0]}, {"fail", counts[1]}};
    fails += counts[1];
  }
  if (!lemmas.empty()) summary["lemma_failures"] = fails;
  std::cout << summary.dump(2) << "\n";
  return fails > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"local-PRG hard-instance laboratory"};
  app.require_subcommand(1);

  CfgBinder build_bind, prg_bind, dist_bind, verify_bind;
  std::string x_str, out_path, kind_str = "pseudorandom";
  int prg_m = 1000;
  bool no_secret = false;
  std::vector<std::string> lemmas, report_paths;
  long verify_samples = 20000;
  bool exhaustive = false;

  auto* build = app.add_subcommand("build-net", "emit a target network as JSON");
  build_bind.attach(build);
  build->add_option("--x", x_str, "secret bit string (default: seeded random)");
  build->add_option("--out", out_path);

  auto* prg = app.add_subcommand("prg", "emit a challenge sequence as JSON");
  prg_bind.attach(prg, /*with_learner_opts=*/false);
  prg->add_option("--kind", kind_str)->check(CLI::IsMember({"random", "pseudorandom"}));
  prg->add_option("--m", prg_m, "number of (edge,label) pairs");
  prg->add_flag("--no-secret", no_secret);
  prg->add_option("--out", out_path);

  auto* dist = app.add_subcommand("distinguish", "run the distinguisher trials");
  dist_bind.attach(dist);
  dist->add_option("--kind", kind_str)->check(CLI::IsMember({"random", "pseudorandom"}));
  dist->add_option("--out", out_path);

  auto* verify = app.add_subcommand("verify", "run the lemma verification suite");
  verify_bind.attach(verify);
  verify->add_option("--samples", verify_samples, "Monte Carlo sample scale");
  verify->add_flag("--exhaustive", exhaustive, "enumerate everything feasible");
  verify->add_option("--lemma", lemmas, "run only these lemma checks");
  verify->add_option("--out", out_path);

  auto* report = app.add_subcommand("report", "aggregate JSON-lines reports");
  report->add_option("files", report_paths, "report files (default: stdin)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (build->parsed()) return cmd_build_net(build_bind.resolve(), x_str, out_path);
    if (prg->parsed()) return cmd_prg(prg_bind.resolve(), kind_str, prg_m, no_secret, out_path);
    if (dist->parsed()) return cmd_distinguish(dist_bind.resolve(), kind_str, out_path);
    if (verify->parsed()) {
      ExperimentConfig cfg = verify_bind.resolve(false);
      // When only --k is given, let the suite pick its default predicate.
      if (verify_bind.cmd->count("--predicate") == 0) cfg.predicate.clear();
      if (cfg.n < 2 || cfg.trials < 1) throw ConfigError("verify: need n >= 2, trials >= 1");
      VerifyOptions opt;
      opt.n = cfg.n;
      opt.k = cfg.k != 0 ? cfg.k
              : cfg.predicate.empty() ? 3
                                      : Predicate::parse(cfg.predicate).k;
      opt.predicate = cfg.predicate;
      opt.trials = cfg.trials;
      opt.samples = verify_samples;
      opt.seed = cfg.seed;
      opt.exhaustive = exhaustive;
      return cmd_verify(opt, lemmas, cfg.strict, out_path);
    }
    if (report->parsed()) return cmd_report(report_paths);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
