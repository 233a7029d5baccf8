#include "hardnet/oracle.hpp"

#include <cmath>

namespace hardnet {

const char* case_tag_name(CaseTag tag) {
  switch (tag) {
    case CaseTag::NonEncoding: return "non_encoding";
    case CaseTag::CleanZero: return "clean_zero";
    case CaseTag::CleanOne: return "clean_one";
    case CaseTag::IntervalHit: return "interval_hit";
    case CaseTag::NearIntervalZero: return "near_interval_zero";
    case CaseTag::NearIntervalOne: return "near_interval_one";
  }
  return "?";
}

OracleState make_oracle(const ChallengeSequence& challenge,
                        const ReluNetwork& net, OracleMode mode, double omega,
                        bool dense, std::uint64_t seed) {
  if (net.n != challenge.graph.n || net.k != challenge.graph.k)
    throw std::invalid_argument("make_oracle: network/challenge shape mismatch");
  OracleState st;
  st.challenge = &challenge;
  st.net = &net;
  st.mode = mode;
  st.c = (mode == OracleMode::Theorem1) ? net.c : 0.0;
  st.omega = omega;
  st.dense = dense;
  st.seed = seed;
  return st;
}

double sample_conditional_gaussian(int bit, double c, Rng& rng) {
  return bit ? trunc_normal_above(c, rng) : trunc_normal_below(c, rng);
}

namespace {

// Draws the Bernoulli bit pattern, substitutes the next challenge encoding
// when the pattern already is one, and reports the consumed label (or -1).
Bits draw_pattern(OracleState& state, Rng& rng, int kn, int n, int k, int& y) {
  Bits z(kn);
  const double p0 = 1.0 / n;
  for (auto& b : z) b = rng.bernoulli(p0) ? 0 : 1;
  y = -1;
  if (decode_encoding(z, n, k)) {
    if (state.cursor >= state.challenge->labels.size())
      throw OracleDepleted("examples oracle: challenge sequence exhausted");
    z = encode_hyperedge(state.challenge->graph.edges[state.cursor], n);
    y = state.challenge->labels[state.cursor];
    ++state.cursor;
  }
  return z;
}

}  // namespace

LabeledExample gen_example_depth3(OracleState& state) {
  if (state.mode != OracleMode::Theorem1)
    throw std::invalid_argument("gen_example_depth3: oracle is in theorem2 mode");
  const int n = state.net->n, k = state.net->k, kn = k * n;
  Rng rng = derive_rng(state.seed, {tag(Stream::Example), state.example_index++});

  int y = -1;
  const Bits z = draw_pattern(state, rng, kn, n, k, y);

  const double c = state.c;
  const double step = 1.0 / (static_cast<double>(n) * n);
  LabeledExample ex;
  ex.input.resize(state.dense ? static_cast<std::size_t>(n) * n : kn);
  bool narrow = false, wide = false;
  for (int i = 0; i < kn; ++i) {
    const double v = sample_conditional_gaussian(z[i], c, rng);
    ex.input[i] = v;
    if (v > c && v < c + step) narrow = true;
    if (v > c - step && v < c + 2.0 * step) wide = true;
  }
  if (state.dense) {
    for (std::size_t i = kn; i < ex.input.size(); ++i) ex.input[i] = rng.normal();
  }

  const double b_hat = state.net->output_bias();
  if (y < 0) {
    ex.label = 0.0;
    ex.tag = CaseTag::NonEncoding;
  } else if (!wide) {
    ex.label = (y == 0) ? b_hat : 0.0;
    ex.tag = (y == 0) ? CaseTag::CleanZero : CaseTag::CleanOne;
  } else if (narrow) {
    ex.label = 0.0;
    ex.tag = CaseTag::IntervalHit;
  } else if (y == 1) {
    ex.label = 0.0;
    ex.tag = CaseTag::NearIntervalOne;
  } else {
    ex.label = eval_n3_branch(*state.net, ex.input);
    ex.tag = CaseTag::NearIntervalZero;
  }
  return ex;
}

LabeledExample gen_example_depth2(OracleState& state) {
  if (state.mode != OracleMode::Theorem2)
    throw std::invalid_argument("gen_example_depth2: oracle is in theorem1 mode");
  const int n = state.net->n, k = state.net->k, kn = k * n;
  Rng rng = derive_rng(state.seed, {tag(Stream::Example), state.example_index++});

  int y = -1;
  const Bits prefix = draw_pattern(state, rng, kn, n, k, y);

  LabeledExample ex;
  const std::size_t dim = state.dense ? static_cast<std::size_t>(n) * n : kn;
  ex.input.resize(dim);
  for (int i = 0; i < kn; ++i) ex.input[i] = static_cast<double>(prefix[i]);
  const double p0 = 1.0 / n;
  for (std::size_t i = kn; i < dim; ++i)
    ex.input[i] = rng.bernoulli(p0) ? 0.0 : 1.0;
  if (state.omega > 0.0) {
    for (auto& v : ex.input) v += state.omega * rng.normal();
  }

  const double b_hat = state.net->output_bias();
  if (y < 0) {
    ex.label = 0.0;
    ex.tag = CaseTag::NonEncoding;
  } else {
    ex.label = (y == 0) ? b_hat : 0.0;
    ex.tag = (y == 0) ? CaseTag::CleanZero : CaseTag::CleanOne;
  }
  return ex;
}

LabeledExample gen_example(OracleState& state) {
  return state.mode == OracleMode::Theorem1 ? gen_example_depth3(state)
                                            : gen_example_depth2(state);
}

HyperedgeProb estimate_hyperedge_prob(int n, int k) {
  if (k > n || k < 1) throw std::invalid_argument("estimate_hyperedge_prob: need 1 <= k <= n");
  double falling = 1.0;
  for (int i = 0; i < k; ++i) falling *= static_cast<double>(n - i);
  const double p = falling * std::pow(1.0 / n, k) *
                   std::pow((n - 1.0) / n, static_cast<double>(n) * k - k);
  HyperedgeProb out;
  out.closed_form = p;
  out.lower_bound = 1.0 / std::log(static_cast<double>(n));
  out.regime_ok = p >= out.lower_bound;
  return out;
}

nlohmann::json example_to_json(const LabeledExample& ex, bool sparse) {
  nlohmann::json j;
  if (sparse) {
    nlohmann::json input = nlohmann::json::object();
    for (std::size_t i = 0; i < ex.input.size(); ++i)
      if (ex.input[i] != 0.0) input[std::to_string(i)] = ex.input[i];
    j["input"] = std::move(input);
  } else {
    j["input"] = ex.input;
  }
  j["label"] = ex.label;
  j["case_tag"] = case_tag_name(ex.tag);
  return j;
}

double prob_z_good_analytic(int n, int k) {
  const double c = threshold_c(n);
  const double step = 1.0 / (static_cast<double>(n) * n);
  // Conditional probabilities of landing in the wide interval given the bit.
  const double hit1 =
      (normal_cdf(c + 2.0 * step) - normal_cdf(c)) * n / (n - 1.0);
  const double hit0 = (normal_cdf(c) - normal_cdf(c - step)) * n;
  const double miss = std::pow(1.0 - hit1, static_cast<double>(n) * k - k) *
                      std::pow(1.0 - hit0, k);
  return estimate_hyperedge_prob(n, k).closed_form * miss;
}

}  // namespace hardnet
