#pragma once

#include "hardnet/network.hpp"
#include "hardnet/smoothing.hpp"

namespace hardnet {

// Which branch of the label table produced an example.
enum class CaseTag {
  NonEncoding,
  CleanZero,
  CleanOne,
  IntervalHit,
  NearIntervalZero,
  NearIntervalOne,
};
const char* case_tag_name(CaseTag tag);

struct LabeledExample {
  std::vector<double> input;  // length n^2, or kn in padding-free mode
  double label = 0.0;
  CaseTag tag = CaseTag::NonEncoding;
};

enum class OracleMode { Theorem1, Theorem2 };

class OracleDepleted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Single-consumer example source. Each example derives its own substream from
// (seed, example_index), so skipping padding generation never shifts the
// draws of later examples.
struct OracleState {
  const ChallengeSequence* challenge = nullptr;
  const ReluNetwork* net = nullptr;  // perturbed target
  OracleMode mode = OracleMode::Theorem1;
  double c = 0.0;
  double omega = 0.0;  // theorem2 input noise
  bool dense = true;   // materialize the n^2-kn padding coordinates
  std::uint64_t seed = 0;
  std::size_t cursor = 0;  // next unread (S_i, y_i)
  std::uint64_t example_index = 0;
};

OracleState make_oracle(const ChallengeSequence& challenge,
                        const ReluNetwork& net, OracleMode mode, double omega,
                        bool dense, std::uint64_t seed);

// Draw from the standard normal conditioned below (bit=0) or above (bit=1)
// the threshold c. The two conditionals mix back to N(0,1) under
// Pr[bit=0] = Phi(c).
double sample_conditional_gaussian(int bit, double c, Rng& rng);

// Gaussian-input oracle: Bernoulli bit pattern, hyperedge substitution,
// per-coordinate conditional draws, N(0,1) padding, branch-first label table.
LabeledExample gen_example_depth3(OracleState& state);

// Smoothed-Bernoulli oracle: binary input with hyperedge substitution on the
// first kn coordinates, additive N(0, omega^2 I) noise, labels b / 0 by
// (encoding?, y_i).
LabeledExample gen_example_depth2(OracleState& state);

LabeledExample gen_example(OracleState& state);

struct HyperedgeProb {
  double closed_form = 0.0;   // exact product formula
  double lower_bound = 0.0;   // 1/log(n), natural log
  bool regime_ok = false;     // closed_form >= lower_bound
};
// Probability that kn iid Bernoulli bits (0 with probability 1/n) form a
// hyperedge encoding.
HyperedgeProb estimate_hyperedge_prob(int n, int k);

// Pr[encoding and no coordinate in the wide interval (c-1/n^2, c+2/n^2)],
// in closed form. This is the weight of the unpredictable-label region.
double prob_z_good_analytic(int n, int k);

// JSON-lines record of an example; sparse mode writes the input as
// {"idx": value} pairs (used when padding generation was suppressed).
nlohmann::json example_to_json(const LabeledExample& ex, bool sparse = false);

}  // namespace hardnet
