#include "hardnet/distinguisher.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace hardnet {

namespace {

class ClippedHypothesis : public Hypothesis {
 public:
  ClippedHypothesis(HypothesisPtr inner, double b_hat)
      : inner_(std::move(inner)), b_hat_(b_hat) {}
  double predict(std::span<const double> input) const override {
    return std::max(0.0, std::min(b_hat_, inner_->predict(input)));
  }

 private:
  HypothesisPtr inner_;
  double b_hat_;
};

class ConstantHypothesis : public Hypothesis {
 public:
  explicit ConstantHypothesis(double v) : v_(v) {}
  double predict(std::span<const double>) const override { return v_; }

 private:
  double v_;
};

class NetworkHypothesis : public Hypothesis {
 public:
  explicit NetworkHypothesis(std::shared_ptr<const ReluNetwork> net)
      : net_(std::move(net)) {}
  double predict(std::span<const double> input) const override {
    return forward_value(*net_, input);
  }

 private:
  std::shared_ptr<const ReluNetwork> net_;
};

class ZeroLearner : public Learner {
 public:
  explicit ZeroLearner(std::size_t budget) : budget_(budget) {}
  HypothesisPtr train(const std::vector<LabeledExample>&) override {
    return std::make_shared<ConstantHypothesis>(0.0);
  }
  std::size_t sample_budget() const override { return budget_; }
  bool padding_independent() const override { return true; }
  std::string name() const override { return "zero"; }

 private:
  std::size_t budget_;
};

class OracleLearner : public Learner {
 public:
  HypothesisPtr train(const std::vector<LabeledExample>&) override {
    if (!net_) throw std::runtime_error("oracle learner: no network bound (secret absent)");
    return std::make_shared<NetworkHypothesis>(net_);
  }
  std::size_t sample_budget() const override { return 0; }
  bool padding_independent() const override { return true; }
  bool needs_oracle_net() const override { return true; }
  void bind_oracle_net(std::shared_ptr<const ReluNetwork> net) override {
    net_ = std::move(net);
  }
  std::string name() const override { return "oracle"; }

 private:
  std::shared_ptr<const ReluNetwork> net_;
};

// Solves (A + ridge*D) alpha = rhs in place via Cholesky; D is the identity
// with the last diagonal entry zeroed (the constant feature is unpenalized).
// Returns false when the factorization hits a non-positive pivot.
bool ridge_solve(std::vector<double> a, int f, double ridge,
                 std::vector<double> rhs, std::vector<double>& alpha) {
  for (int i = 0; i + 1 < f; ++i) a[i * f + i] += ridge;
  // Cholesky a = L L^T
  for (int i = 0; i < f; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a[i * f + j];
      for (int t = 0; t < j; ++t) s -= a[i * f + t] * a[j * f + t];
      if (i == j) {
        if (s <= 0.0) return false;
        a[i * f + i] = std::sqrt(s);
      } else {
        a[i * f + j] = s / a[j * f + j];
      }
    }
  }
  // forward/back substitution
  for (int i = 0; i < f; ++i) {
    double s = rhs[i];
    for (int t = 0; t < i; ++t) s -= a[i * f + t] * rhs[t];
    rhs[i] = s / a[i * f + i];
  }
  alpha.assign(f, 0.0);
  for (int i = f - 1; i >= 0; --i) {
    double s = rhs[i];
    for (int t = i + 1; t < f; ++t) s -= a[t * f + i] * alpha[t];
    alpha[i] = s / a[i * f + i];
  }
  return true;
}

class RandomFeaturesHypothesis : public Hypothesis {
 public:
  RandomFeaturesHypothesis(Matrix g, std::vector<double> b, std::vector<double> alpha)
      : g_(std::move(g)), b_(std::move(b)), alpha_(std::move(alpha)) {}

  void features(std::span<const double> x, std::vector<double>& phi) const {
    const int w = static_cast<int>(g_.rows());
    phi.assign(2 * w + 1, 0.0);
    for (int r = 0; r < w; ++r) {
      double u = b_[r];
      const double* row = g_.row(r);
      const std::size_t len = std::min(x.size(), g_.cols());
      for (std::size_t c = 0; c < len; ++c) u += row[c] * x[c];
      phi[r] = u > 0.0 ? u : 0.0;
      phi[w + r] = u < 0.0 ? -u : 0.0;
    }
    phi[2 * w] = 1.0;
  }

  double predict(std::span<const double> x) const override {
    std::vector<double> phi;
    features(x, phi);
    double s = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) s += alpha_[i] * phi[i];
    return s;
  }

 private:
  Matrix g_;
  std::vector<double> b_;
  std::vector<double> alpha_;
};

class RandomFeaturesLearner : public Learner {
 public:
  RandomFeaturesLearner(int width, double ridge, std::size_t budget, std::uint64_t seed)
      : width_(width), ridge_(ridge), budget_(budget), seed_(seed) {
    if (width < 1) throw std::invalid_argument("random features: width >= 1");
  }

  HypothesisPtr train(const std::vector<LabeledExample>& sample) override {
    if (sample.empty()) throw std::invalid_argument("random features: empty sample");
    const std::size_t dim = sample[0].input.size();
    Rng rng = derive_rng(seed_, {tag(Stream::Learner)});
    Matrix g(width_, dim);
    std::vector<double> bias(width_);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    for (auto& v : g.data()) v = scale * rng.normal();
    for (auto& v : bias) v = rng.normal();

    const int f = 2 * width_ + 1;
    RandomFeaturesHypothesis probe(g, bias, std::vector<double>(f, 0.0));
    std::vector<double> gram(static_cast<std::size_t>(f) * f, 0.0);
    std::vector<double> rhs(f, 0.0);
    std::vector<double> phi;
    for (const auto& ex : sample) {
      probe.features(ex.input, phi);
      for (int i = 0; i < f; ++i) {
        rhs[i] += phi[i] * ex.label;
        for (int j = 0; j <= i; ++j) gram[i * f + j] += phi[i] * phi[j];
      }
    }
    for (int i = 0; i < f; ++i)
      for (int j = i + 1; j < f; ++j) gram[i * f + j] = gram[j * f + i];

    // A singular system signals a too-small ridge; back off geometrically.
    double ridge = ridge_;
    std::vector<double> alpha;
    for (int attempt = 0; attempt < 8; ++attempt) {
      if (ridge_solve(gram, f, std::max(ridge, 1e-300), rhs, alpha))
        return std::make_shared<RandomFeaturesHypothesis>(std::move(g), std::move(bias),
                                                          std::move(alpha));
      ridge = std::max(ridge * 10.0, 1e-12);
    }
    throw std::runtime_error("random features: normal equations stayed singular");
  }

  std::size_t sample_budget() const override { return budget_; }
  std::string name() const override { return "random-features"; }

 private:
  int width_;
  double ridge_;
  std::size_t budget_;
  std::uint64_t seed_;
};

}  // namespace

HypothesisPtr clip_hypothesis(HypothesisPtr h, double b_hat) {
  if (b_hat < 0.0) throw std::invalid_argument("clip_hypothesis: b_hat >= 0 required");
  return std::make_shared<ClippedHypothesis>(std::move(h), b_hat);
}

double holdout_loss(const Hypothesis& h, const std::vector<LabeledExample>& holdout) {
  if (holdout.empty()) throw std::invalid_argument("holdout_loss: empty holdout");
  std::vector<double> sq;
  sq.reserve(holdout.size());
  for (const auto& ex : holdout) {
    const double r = h.predict(ex.input) - ex.label;
    sq.push_back(r * r);
  }
  return pairwise_sum(sq) / static_cast<double>(sq.size());
}

nlohmann::json decision_to_json(const Decision& d) {
  nlohmann::json cases;
  for (const auto& [name, stat] : d.breakdown)
    cases[name] = {{"count", stat.count}, {"loss_sum", stat.loss_sum}};
  return nlohmann::json{{"verdict", d.verdict},
                        {"loss", d.loss},
                        {"threshold", d.threshold},
                        {"holdout_size", d.holdout_size},
                        {"b_hat", d.b_hat},
                        {"tau", d.tau},
                        {"omega", d.omega},
                        {"case_breakdown", cases},
                        {"regime_flags", d.regime_flags}};
}

std::unique_ptr<Learner> make_zero_learner(std::size_t budget) {
  return std::make_unique<ZeroLearner>(budget);
}

std::unique_ptr<Learner> make_oracle_learner() {
  return std::make_unique<OracleLearner>();
}

std::unique_ptr<Learner> make_random_features_learner(int width, double ridge,
                                                      std::size_t budget,
                                                      std::uint64_t seed) {
  return std::make_unique<RandomFeaturesLearner>(width, ridge, budget, seed);
}

std::unique_ptr<Learner> make_learner(const ExperimentConfig& cfg,
                                      std::uint64_t trial_seed) {
  if (cfg.learner == "oracle") return make_oracle_learner();
  if (cfg.learner == "zero") return make_zero_learner(cfg.m);
  if (cfg.learner == "random-features")
    return make_random_features_learner(cfg.rf_width, cfg.rf_ridge, cfg.m, trial_seed);
  throw ConfigError("unknown learner: " + cfg.learner);
}

Decision run_distinguisher(const ChallengeSequence& challenge, Learner& learner,
                           const ExperimentConfig& cfg, std::uint64_t trial_seed) {
  const Predicate p = cfg.parsed_predicate();
  const int n = cfg.n;
  const std::size_t holdout_size =
      std::min<std::size_t>(static_cast<std::size_t>(n) * n * n, cfg.holdout_cap);
  if (static_cast<std::size_t>(challenge.graph.m()) <
      learner.sample_budget() + holdout_size)
    throw std::invalid_argument("run_distinguisher: challenge shorter than m + holdout");

  // The target needs some secret; only the verification-only oracle learner
  // on a pseudorandom challenge gets the real one. Everything the oracle
  // itself reads (b_hat, the e3 branch) is secret-independent.
  Bits x_net;
  if (learner.needs_oracle_net() && challenge.kind == ChallengeKind::Pseudorandom) {
    if (!challenge.secret)
      throw std::invalid_argument("oracle learner: challenge secret absent");
    x_net = *challenge.secret;
  } else {
    Rng phantom = derive_rng(trial_seed, {tag(Stream::PhantomSecret)});
    x_net.resize(n);
    for (auto& b : x_net) b = phantom.bernoulli(0.5) ? 1 : 0;
  }

  const ReluNetwork target = (cfg.mode == OracleMode::Theorem1)
                                 ? assemble_depth3_target(p, x_net, n)
                                 : assemble_depth2_target(p, x_net, n);
  SmoothingConfig sc = make_smoothing_config(target);
  if (cfg.tau_policy == TauPolicy::Explicit) sc.tau = cfg.tau_explicit;
  if (cfg.omega_policy == TauPolicy::Explicit) sc.omega = cfg.omega_explicit;

  Rng xi_rng = derive_rng(trial_seed, {tag(Stream::ParamNoise)});
  auto net_hat =
      std::make_shared<const ReluNetwork>(perturb_network(target, sc.tau, xi_rng));
  const double b_hat = net_hat->output_bias();

  const bool dense = cfg.dense || !learner.padding_independent();
  OracleState oracle =
      make_oracle(challenge, *net_hat, cfg.mode,
                  cfg.mode == OracleMode::Theorem2 ? sc.omega : 0.0, dense,
                  derive_seed(trial_seed, {tag(Stream::Example)}));
  learner.bind_oracle_net(net_hat);

  std::vector<LabeledExample> sample;
  sample.reserve(learner.sample_budget());
  for (std::size_t i = 0; i < learner.sample_budget(); ++i)
    sample.push_back(gen_example(oracle));
  HypothesisPtr h = learner.train(sample);
  sample.clear();
  sample.shrink_to_fit();
  HypothesisPtr clipped = clip_hypothesis(std::move(h), b_hat);

  Decision d;
  d.b_hat = b_hat;
  d.tau = sc.tau;
  d.omega = (cfg.mode == OracleMode::Theorem2) ? sc.omega : 0.0;
  d.holdout_size = holdout_size;

  // Stream the holdout; inputs are discarded after scoring.
  std::vector<double> sq;
  sq.reserve(holdout_size);
  for (std::size_t i = 0; i < holdout_size; ++i) {
    const LabeledExample ex = gen_example(oracle);
    const double r = clipped->predict(ex.input) - ex.label;
    sq.push_back(r * r);
    auto& stat = d.breakdown[case_tag_name(ex.tag)];
    ++stat.count;
    stat.loss_sum += r * r;
  }
  d.loss = pairwise_sum(sq) / static_cast<double>(holdout_size);

  const double p_good = prob_z_good_analytic(n, p.k);
  switch (cfg.threshold_policy) {
    case ThresholdPolicy::Paper: d.threshold = 2.0 / n; break;
    case ThresholdPolicy::Midpoint: d.threshold = p_good * b_hat * b_hat / 4.0; break;
    case ThresholdPolicy::Explicit: d.threshold = cfg.threshold_explicit; break;
  }
  d.verdict = (d.loss <= d.threshold) ? 1 : 0;

  // Does the threshold separate the two expected loss levels at this n?
  const double random_mean = p_good * b_hat * b_hat / 2.0;
  const double sigma = std::sqrt(random_mean * b_hat * b_hat /
                                 static_cast<double>(holdout_size));
  if (d.threshold >= random_mean - 5.0 * sigma)
    d.regime_flags.push_back("threshold_not_below_random_loss_level");
  if (cfg.threshold_policy == ThresholdPolicy::Paper && 2.0 / n >= random_mean / 2.0)
    d.regime_flags.push_back("paper_threshold_requires_larger_n");
  const NetworkAudit audit = audit_network(target);
  for (const auto& f : audit.regime_flags) d.regime_flags.push_back(f);
  return d;
}

std::vector<Decision> run_trials(const ExperimentConfig& cfg, ChallengeKind kind) {
  cfg.validate();
  const Predicate p = cfg.parsed_predicate();
  std::vector<Decision> out(cfg.trials);
  std::vector<std::size_t> next(1, 0);

  auto run_one = [&](int t) {
    const std::uint64_t trial_seed =
        derive_seed(cfg.seed, {tag(Stream::Trial), static_cast<std::uint64_t>(t)});
    auto learner = make_learner(cfg, trial_seed);
    const std::size_t holdout_size = std::min<std::size_t>(
        static_cast<std::size_t>(cfg.n) * cfg.n * cfg.n, cfg.holdout_cap);
    Rng ch_rng = derive_rng(trial_seed, {tag(Stream::Graph)});
    const ChallengeSequence challenge =
        sample_challenge(p, cfg.n, static_cast<int>(learner->sample_budget() + holdout_size),
                         kind, ch_rng);
    out[t] = run_distinguisher(challenge, *learner, cfg, trial_seed);
  };

  const int jobs = std::min(cfg.jobs, cfg.trials);
  if (jobs <= 1) {
    for (int t = 0; t < cfg.trials; ++t) run_one(t);
  } else {
    std::atomic<int> counter{0};
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int w = 0; w < jobs; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const int t = counter.fetch_add(1);
          if (t >= cfg.trials) return;
          run_one(t);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  return out;
}

}  // namespace hardnet
