#pragma once

#include "hardnet/network.hpp"
#include "hardnet/numerics.hpp"

namespace hardnet {

// Flattened network parameters: weight matrices in layer order, then bias
// vectors in layer order. flatten/unflatten round-trips bit for bit.
struct ParamShape {
  std::vector<std::pair<std::size_t, std::size_t>> weight_dims;
  std::vector<std::size_t> bias_dims;
};

struct ParamVector {
  std::vector<double> values;
  ParamShape shape;
  std::size_t size() const { return values.size(); }
};

ParamVector flatten_params(const ReluNetwork& net);
// Writes the values back into a network of identical architecture.
void unflatten_params(const ParamVector& theta, ReluNetwork& net);

// Upper bound L on the parameter-Lipschitz constant of every neuron
// pre-activation over the region {|theta' - theta|_2 <= 1, |input|_2 <= R}.
//
// Derivation (layer l, neuron v with row w_v, bias b_v, previous output y):
//   - own-parameter block:   |grad_{(w_v,b_v)} a_v|_2 = |(y,1)|_2 <= M_{l-1}+1
//   - earlier layers:        |grad a_v| <= sum_u |w_uv| |grad a_u|
//                            <= (|w_v^0|_1 + sqrt(width)) * G_{l-1}
//   - output magnitudes:     |y_l|_2 <= F_l * (M_{l-1}+1) with
//                            F_l = sqrt(sum_v (|(w_v^0,b_v^0)|_2 + 1)^2)
// where the +1 / +sqrt(width) terms cover any perturbation of norm <= 1.
// L = max_l G_l with G_l = M_{l-1} + 1 + s_l * G_{l-1}, M_0 = R, G_0 = 0.
double lipschitz_budget(const ReluNetwork& net, double input_radius);

// Same style of bound for the input-Lipschitz constant of every neuron
// pre-activation (used to pick the input smoothing magnitude).
double input_lipschitz_budget(const ReluNetwork& net);

// tau = 1/(q*sqrt(2 r n)): then |xi|_2 <= 1/q except with probability at
// most exp(-n/2).
double select_tau(double q, std::size_t r, int n);

struct SmoothingConfig {
  double tau = 0.0;
  double omega = 0.0;  // nonzero for theorem2 targets only
  double q = 1.0;      // parameter-Lipschitz budget times safety factor
  double q_in = 1.0;
  std::size_t r = 0;  // parameter count
};

// The constructive rule: q = 4 * lipschitz_budget (the margins tolerate a
// total drift of 1/2; parameter and input noise each get a 1/4 share),
// tau = select_tau(q, r, n); omega analogously from the input budget.
SmoothingConfig make_smoothing_config(const ReluNetwork& net);

ParamVector perturb_params(const ParamVector& theta, double tau, Rng& rng);
std::vector<double> perturb_input(std::span<const double> z, double omega, Rng& rng);
// Convenience: flatten, add noise, unflatten into a copy.
ReluNetwork perturb_network(const ReluNetwork& net, double tau, Rng& rng);

struct MinSingularReport {
  int d = 0;
  double tau = 0.0;
  double t = 0.0;
  int trials = 0;
  long count_le_t = 0;
  double empirical_freq = 0.0;
  double bound = 0.0;  // min(1, 2.35 t sqrt(d) / tau)
};

// Monte Carlo estimate of Pr[sigma_min(W + P) <= t] with iid N(0,tau^2)
// entries in P, reported against the analytic bound.
MinSingularReport min_singular_check(const Matrix& w, double tau, double t,
                                     int trials, Rng& rng);

nlohmann::json min_singular_report_to_json(const MinSingularReport& r);

}  // namespace hardnet
