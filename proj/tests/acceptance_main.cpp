// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Tolerances are fixed here, not configurable.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hardnet/verify.hpp"

using namespace hardnet;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail, double seconds) {
  if (!pass) ++g_failures;
  std::printf("[%s] criterion %d: %s (%.1fs)\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str(), seconds);
  std::fflush(stdout);
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

constexpr std::uint64_t kSeed = 20240817;

// ---------------------------------------------------------------------------
// 1. Exhaustive gadget correctness: DNF equivalence on all encodings and the
//    validity layer over all binary vectors (kn <= 16) or 1e5 samples.
void criterion1() {
  Timer timer;
  long failures = 0, trials = 0;
  for (int k = 2; k <= 3; ++k) {
    for (int n = 3; n <= 8; ++n) {
      const auto dnf = check_dnf_equivalence(n, k, 20, 0, kSeed + n + 10 * k);
      const auto val = check_n2_second_layer(n, k, 100000, kSeed + n + 10 * k);
      failures += dnf.failures + val.failures;
      trials += dnf.trials + val.trials;
    }
  }
  const double secs = timer.seconds();
  std::ostringstream os;
  os << "gadget correctness: " << failures << " failures in " << trials << " checks";
  report(1, failures == 0 && secs < 60.0, os.str(), secs);
}

// ---------------------------------------------------------------------------
// 2. Unperturbed margins on the assembled depth-3 target: every gate input in
//    (-inf,-1] u [2,inf) on the correct side, exact to 1e-9.
void criterion2() {
  Timer timer;
  long failures = 0, trials = 0;
  for (int k = 2; k <= 3; ++k) {
    for (int n = 3; n <= 8; ++n) {
      const auto rep = check_margins_exhaustive(n, k, 20, 4000, kSeed + n + 100 * k);
      failures += rep.failures;
      trials += rep.trials;
    }
  }
  std::ostringstream os;
  os << "margin gap: " << failures << " failures in " << trials << " traced cases";
  report(2, failures == 0, os.str(), timer.seconds());
}

// ---------------------------------------------------------------------------
// 3. Perturbation stability at n=50 with the rule-selected tau: 500 draws x
//    200 bounded inputs, drift <= 1/2, every |xi| within the 1/q ball.
void criterion3() {
  Timer timer;
  const auto rep =
      check_perturbation_stability(50, Predicate::xor_maj(1, 2), 500, 200, kSeed + 3);
  std::ostringstream os;
  os << "stability: " << rep.failures << "/" << rep.trials << " drift violations; "
     << rep.note;
  const double secs = timer.seconds();
  report(3, rep.pass && secs < 300.0, os.str(), secs);
}

// ---------------------------------------------------------------------------
// 4. Oracle distributional soundness.
void criterion4() {
  Timer timer;
  bool pass = true;
  std::ostringstream os;

  {  // KS per coordinate + pairwise decorrelation + substitution frequency
    const int n = 50, k = 3, kn = k * n, num = 100000;
    const int pad_cols = 50;
    const auto p = Predicate::xor_maj(1, 2);
    Rng rng(kSeed + 4);
    const auto challenge =
        sample_challenge(p, n, num, ChallengeKind::Pseudorandom, rng);
    const auto target = assemble_depth3_target(p, *challenge.secret, n);
    const auto sc = make_smoothing_config(target);
    Rng xi(kSeed + 40);
    const auto net_hat = perturb_network(target, sc.tau, xi);
    auto oracle =
        make_oracle(challenge, net_hat, OracleMode::Theorem1, 0.0, true, kSeed + 41);

    const int cols = kn + pad_cols;
    std::vector<std::vector<double>> data(cols);
    for (auto& c : data) c.reserve(num);
    for (int i = 0; i < num; ++i) {
      const auto ex = gen_example_depth3(oracle);
      for (int j = 0; j < kn; ++j) data[j].push_back(ex.input[j]);
      for (int j = 0; j < pad_cols; ++j)
        data[kn + j].push_back(ex.input[kn + j * ((n * n - kn) / pad_cols)]);
    }

    // pairwise correlations over the prefix first (the KS pass sorts the
    // columns in place afterwards), family-wise threshold 5/sqrt(N)
    std::vector<double> means(kn);
    for (int j = 0; j < kn; ++j) {
      double m = 0.0;
      for (double v : data[j]) m += v / num;
      means[j] = m;
    }
    double rho_max = 0.0;
    for (int a = 0; a < kn; ++a) {
      for (int b = a + 1; b < kn; ++b) {
        double s = 0.0;
        for (int i = 0; i < num; ++i)
          s += (data[a][i] - means[a]) * (data[b][i] - means[b]);
        rho_max = std::max(rho_max, std::fabs(s / num));
      }
    }
    pass = pass && rho_max < 5.0 / std::sqrt(static_cast<double>(num));
    os << "max|rho| " << rho_max;

    // family-wise KS at level 0.01 (Bonferroni across the tested coordinates)
    const double crit = ks_critical(0.01 / cols, num);
    int ks_fail = 0;
    double ks_max = 0.0;
    for (int j = 0; j < cols; ++j) {
      const double d = ks_statistic_normal(data[j]);
      ks_max = std::max(ks_max, d);
      if (d >= crit) ++ks_fail;
    }
    pass = pass && ks_fail == 0;
    os << "; KS max " << ks_max << " (crit " << crit << ", " << ks_fail << " fail)";

    const double p_enc = estimate_hyperedge_prob(n, k).closed_form;
    const double freq = static_cast<double>(oracle.cursor) / num;
    const double sigma = std::sqrt(p_enc * (1 - p_enc) / num);
    pass = pass && std::fabs(freq - p_enc) <= 3.0 * sigma;
    os << "; substitution " << freq << " vs " << p_enc;
  }

  // P[Z] >= 1/(2 ln n): in regime at k=2 for every listed n (k=3 sits below
  // the bound at desk scale and is reported by the verify suite instead).
  for (int n : {50, 100, 200, 500}) {
    const auto rep = check_prob_z_good(n, 2, 100000, kSeed + 4 + n);
    pass = pass && rep.regime_ok && rep.pass && rep.empirical >= rep.bound;
    os << "; P[Z](" << n << ")=" << rep.empirical << ">=" << rep.bound;
  }
  report(4, pass, os.str(), timer.seconds());
}

// ---------------------------------------------------------------------------
// 5. Realizability at n=50: labels match the perturbed network on 1e4
//    examples in both modes.
void criterion5() {
  Timer timer;
  const auto r1 =
      check_realizability(OracleMode::Theorem1, 50, Predicate::xor_maj(1, 2), 10000,
                          kSeed + 5);
  const auto r2 =
      check_realizability(OracleMode::Theorem2, 50, Predicate::xor_maj(1, 2), 10000,
                          kSeed + 50);
  std::ostringstream os;
  os << "realizability rates: theorem1 " << r1.empirical << ", theorem2 "
     << r2.empirical << " (floor " << r1.bound << " - 3sigma)";
  const double secs = timer.seconds();
  report(5, r1.pass && r2.pass && secs < 600.0, os.str(), secs);
}

// ---------------------------------------------------------------------------
// 6. End-to-end distinguishing: n=64, k=3, midpoint threshold, 100+100
//    trials, holdout 1e4: advantage >= 0.8 and the random-case loss within
//    20% of p b^2/2.
void criterion6() {
  Timer timer;
  ExperimentConfig cfg;
  cfg.n = 64;
  cfg.predicate = "xormaj:1:2";
  cfg.learner = "oracle";
  cfg.threshold_policy = ThresholdPolicy::Midpoint;
  cfg.holdout_cap = 10000;
  cfg.trials = 100;
  cfg.seed = kSeed + 6;
  cfg.jobs = 1;

  const auto pseudo = run_trials(cfg, ChallengeKind::Pseudorandom);
  const auto random = run_trials(cfg, ChallengeKind::Random);
  double f1_pseudo = 0.0, f1_random = 0.0, random_loss = 0.0, b2 = 0.0;
  for (const auto& d : pseudo) f1_pseudo += d.verdict / 100.0;
  for (const auto& d : random) {
    f1_random += d.verdict / 100.0;
    random_loss += d.loss / 100.0;
    b2 += d.b_hat * d.b_hat / 100.0;
  }
  const double advantage = f1_pseudo - f1_random;
  const double derived = prob_z_good_analytic(64, 3) * b2 / 2.0;
  const bool loss_ok = std::fabs(random_loss - derived) <= 0.2 * derived;
  std::ostringstream os;
  os << "advantage " << advantage << " (P[1|pseudo]=" << f1_pseudo
     << ", P[1|random]=" << f1_random << "); random loss " << random_loss
     << " vs derived " << derived;
  const double secs = timer.seconds();
  report(6, advantage >= 0.8 && loss_ok && secs < 1800.0, os.str(), secs);
}

// ---------------------------------------------------------------------------
// 7. Non-degeneracy: P[sigma_min <= tau/d] under the analytic bound and at
//    most 0.1, over the (d, tau) grid, 2000 trials each.
void criterion7() {
  Timer timer;
  bool pass = true;
  std::ostringstream os;
  os << "sigma_min: ";
  for (int d : {20, 50, 100}) {
    for (double tau : {0.1, 0.01}) {
      const auto rep = check_min_singular(d, tau, 2000, kSeed + 7 + d);
      pass = pass && rep.pass;
      os << "d" << d << "/t" << tau << ": " << rep.empirical << "<=" << rep.bound
         << (rep.pass ? " " : " FAIL ");
    }
  }
  report(7, pass, os.str(), timer.seconds());
}

// ---------------------------------------------------------------------------
// 8. Reproducibility: identical CLI invocations produce byte-identical
//    reports.
#ifndef HARDNET_CLI_PATH
#define HARDNET_CLI_PATH "hardnet"
#endif

std::string run_cli(const std::string& args, const std::string& out_file, bool* ok) {
  const std::string cmd = std::string(HARDNET_CLI_PATH) + " " + args + " --out " +
                          out_file + " 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  if (rc != 0) {
    *ok = false;
    return {};
  }
  std::ifstream in(out_file, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void criterion8() {
  Timer timer;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path();
  bool ok = true;
  std::ostringstream os;
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"verify --n 8 --k 2 --trials 5 --samples 2000 --seed 7", "verify"},
      {"distinguish --n 12 --predicate xor:2 --learner oracle --kind pseudorandom "
       "--trials 3 --holdout-cap 300 --seed 9",
       "distinguish"},
      {"prg --n 6 --k 2 --m 40 --kind pseudorandom --seed 11", "prg"},
      {"build-net --n 3 --predicate xor:2 --x 101", "build-net"},
  };
  for (const auto& [args, name] : runs) {
    const std::string f1 = (dir / ("hardnet_rep1_" + name + ".jsonl")).string();
    const std::string f2 = (dir / ("hardnet_rep2_" + name + ".jsonl")).string();
    const std::string a = run_cli(args, f1, &ok);
    const std::string b = run_cli(args, f2, &ok);
    if (a.empty() || a != b) {
      ok = false;
      os << name << " differs; ";
    }
    std::remove(f1.c_str());
    std::remove(f2.c_str());
  }
  // a serialized network reloads bit-exactly
  {
    const std::string f = (dir / "hardnet_rep_net.json").string();
    bool cli_ok = true;
    const std::string text = run_cli("build-net --n 3 --predicate xor:2 --x 101", f, &cli_ok);
    std::remove(f.c_str());
    if (!cli_ok || network_to_json(network_from_json(nlohmann::json::parse(text))).dump() + "\n" != text) {
      ok = false;
      os << "network reload not bit-identical; ";
    }
  }
  os << "byte-identical reruns";
  report(8, ok, os.str(), timer.seconds());
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  auto want = [&](int c) {
    return only.empty() || std::find(only.begin(), only.end(), c) != only.end();
  };
  if (want(1)) criterion1();
  if (want(2)) criterion2();
  if (want(3)) criterion3();
  if (want(4)) criterion4();
  if (want(5)) criterion5();
  if (want(6)) criterion6();
  if (want(7)) criterion7();
  if (want(8)) criterion8();
  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
  } else {
    std::printf("acceptance: %d criteria FAILED\n", g_failures);
  }
  return g_failures;
}
