#pragma once

#include "hardnet/distinguisher.hpp"

namespace hardnet {

struct VerifyReport {
  std::string lemma_id;
  long trials = 0;
  long failures = 0;
  double bound = 0.0;      // analytic reference the check compares against
  double empirical = 0.0;  // measured frequency/rate
  bool regime_ok = true;   // the inequalities behind the assertion hold at this size
  bool asserted = true;    // false = informational only
  bool pass = true;
  std::uint64_t seed = 0;
  std::string note;
};

nlohmann::json verify_report_to_json(const VerifyReport& r);

// The full lemma inventory covered by the suite, in suite order.
const std::vector<std::string>& lemma_ids();

// --- gadget checks (exact margins, tolerance 1e-9) ---

// DNF compilation agrees with P_x on hyperedge encodings. Exhaustive over all
// edges for n <= 10, otherwise on `samples` random edges.
VerifyReport check_dnf_equivalence(int n, int k, int num_x, long samples,
                                   std::uint64_t seed);
// Term rows hit exactly 2 / at most -1 on binary encodings.
VerifyReport check_n1_second_layer(int n, int k, int num_x, std::uint64_t seed);
// Composed threshold + term rows on continuous inputs away from (c, c+1/n^2).
VerifyReport check_n1(int n, int k, int num_x, long samples, std::uint64_t seed);
// Validity rows over binary vectors: exhaustive when kn <= 16, else sampled.
VerifyReport check_n2_second_layer(int n, int k, long samples, std::uint64_t seed);
// Composed threshold + validity rows on continuous inputs.
VerifyReport check_n2(int n, int k, long samples, std::uint64_t seed);
// Interval detector plateau/dead-zone/ramp values.
VerifyReport check_n3(int n, int k, long samples, std::uint64_t seed);

// All gate pre-activations of the assembled depth-3 target land in
// (-inf,-1] u [2,inf) on the right side for every lemma case class;
// exhaustive over encodings (and over all binary patterns when kn <= 16).
VerifyReport check_margins_exhaustive(int n, int k, int num_x, long samples,
                                      std::uint64_t seed);

// --- smoothing checks ---

// |xi| <= 1/q for tau = select_tau(q, r, n), target failure mass exp(-n/2).
VerifyReport check_tau_exists(double q, std::size_t r, int n, long trials,
                              std::uint64_t seed);

// Pre-activation drift under the selected tau: max drift <= 1/2 with
// violation frequency <= 1/n (and every draw inside the 1/q ball).
VerifyReport check_perturbation_stability(int n, const Predicate& p, long draws,
                                          long inputs, std::uint64_t seed);

// Properties of the perturbed depth-3 gates on engineered case classes;
// tau < 0 selects the paper-formula tau.
VerifyReport check_properties_p(int n, const Predicate& p, long draws,
                                long inputs_per_class, double tau,
                                std::uint64_t seed);
// Depth-2 analogue with both parameter and input noise; tau/omega < 0 select
// the rule values.
VerifyReport check_properties_q(int n, const Predicate& p, long draws,
                                long inputs_per_class, double tau, double omega,
                                std::uint64_t seed);

// Oracle labels match the perturbed network (rate >= 1 - 2/n).
VerifyReport check_realizability(OracleMode mode, int n, const Predicate& p,
                                 long examples, std::uint64_t seed);

// --- probability checks ---

VerifyReport check_prob_z_good_discrete(int n, int k, long samples,
                                        std::uint64_t seed);
VerifyReport check_prob_z_good(int n, int k, long samples, std::uint64_t seed);

// --- loss separation ---

VerifyReport check_pseudorandom_small_loss(const ExperimentConfig& cfg);
VerifyReport check_random_large_loss(const ExperimentConfig& cfg);

// --- non-degeneracy ---

// W is a fixed seeded standard-Gaussian base matrix; t = tau/d.
VerifyReport check_min_singular(int d, double tau, int trials, std::uint64_t seed);

struct VerifyOptions {
  int n = 8;
  int k = 3;
  std::string predicate;  // empty = default for the arity
  long trials = 100;      // perturbation-draw / distinguisher-trial scale
  long samples = 20000;   // Monte Carlo sample scale
  std::uint64_t seed = 1;
  bool exhaustive = false;
};

// Runs the named lemma check with sizes derived from the options.
VerifyReport run_verify_lemma(const std::string& id, const VerifyOptions& opt);
std::vector<VerifyReport> run_verify_suite(const VerifyOptions& opt);

// Default predicate battery for arity k (named constructions plus seeded
// random tables).
std::vector<Predicate> predicate_test_set(int k, std::uint64_t seed);

}  // namespace hardnet
