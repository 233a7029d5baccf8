#pragma once

#include <map>
#include <memory>

#include "hardnet/config.hpp"

namespace hardnet {

class Hypothesis {
 public:
  virtual ~Hypothesis() = default;
  virtual double predict(std::span<const double> input) const = 0;
};
using HypothesisPtr = std::shared_ptr<const Hypothesis>;

class Learner {
 public:
  virtual ~Learner() = default;
  virtual HypothesisPtr train(const std::vector<LabeledExample>& sample) = 0;
  virtual std::size_t sample_budget() const = 0;
  // Padding-independent learners may be fed inputs without the n^2-kn
  // padding coordinates (every constructed target has zero weights there).
  virtual bool padding_independent() const { return false; }
  // Verification-only learners read the generation-side network.
  virtual bool needs_oracle_net() const { return false; }
  virtual void bind_oracle_net(std::shared_ptr<const ReluNetwork>) {}
  virtual std::string name() const = 0;
};

// Pointwise clamp of the prediction to [0, b].
HypothesisPtr clip_hypothesis(HypothesisPtr h, double b_hat);

// Mean squared error over the holdout, pairwise-summed.
double holdout_loss(const Hypothesis& h, const std::vector<LabeledExample>& holdout);

struct CaseStat {
  long count = 0;
  double loss_sum = 0.0;
};

struct Decision {
  int verdict = 0;  // 1 = pseudorandom, 0 = random
  double loss = 0.0;
  double threshold = 0.0;
  std::size_t holdout_size = 0;
  double b_hat = 1.0;
  double tau = 0.0;
  double omega = 0.0;
  std::map<std::string, CaseStat> breakdown;  // per case tag
  std::vector<std::string> regime_flags;
};

nlohmann::json decision_to_json(const Decision& d);

std::unique_ptr<Learner> make_zero_learner(std::size_t budget = 0);
// Cheating learner for end-to-end verification: outputs exactly the
// perturbed network the oracle labels with. train() ignores its sample.
std::unique_ptr<Learner> make_oracle_learner();
// Honest baseline: frozen random ReLU features (paired signs plus a constant)
// with a ridge-regularized least-squares readout.
std::unique_ptr<Learner> make_random_features_learner(int width, double ridge,
                                                      std::size_t budget,
                                                      std::uint64_t seed);
std::unique_ptr<Learner> make_learner(const ExperimentConfig& cfg,
                                      std::uint64_t trial_seed);

// One full run: build the target for this challenge, perturb it, train the
// learner on m oracle examples, clip, score a fresh holdout, threshold.
Decision run_distinguisher(const ChallengeSequence& challenge, Learner& learner,
                           const ExperimentConfig& cfg, std::uint64_t trial_seed);

// One trial with its own challenge and learner, fully seeded by
// (cfg.seed, trial_index).
Decision run_trial(const ExperimentConfig& cfg, ChallengeKind kind, int trial_index);

// Per-trial challenges and learners, seeds derived from cfg.seed and the
// trial index; trials run independently (optionally in parallel) and are
// reported in index order.
std::vector<Decision> run_trials(const ExperimentConfig& cfg, ChallengeKind kind);

}  // namespace hardnet
