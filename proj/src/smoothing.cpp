#include "hardnet/smoothing.hpp"

#include <cmath>

namespace hardnet {

ParamVector flatten_params(const ReluNetwork& net) {
  ParamVector theta;
  theta.values.reserve(net.param_count());
  for (const auto& layer : net.layers) {
    theta.shape.weight_dims.emplace_back(layer.w.rows(), layer.w.cols());
    theta.values.insert(theta.values.end(), layer.w.data().begin(),
                        layer.w.data().end());
  }
  for (const auto& layer : net.layers) {
    theta.shape.bias_dims.push_back(layer.b.size());
    theta.values.insert(theta.values.end(), layer.b.begin(), layer.b.end());
  }
  return theta;
}

void unflatten_params(const ParamVector& theta, ReluNetwork& net) {
  if (theta.shape.weight_dims.size() != net.layers.size() ||
      theta.values.size() != net.param_count())
    throw std::invalid_argument("unflatten_params: shape mismatch");
  std::size_t pos = 0;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    auto& w = net.layers[l].w;
    if (theta.shape.weight_dims[l] != std::make_pair(w.rows(), w.cols()))
      throw std::invalid_argument("unflatten_params: weight shape mismatch");
    std::copy(theta.values.begin() + pos, theta.values.begin() + pos + w.size(),
              w.data().begin());
    pos += w.size();
  }
  for (auto& layer : net.layers) {
    std::copy(theta.values.begin() + pos,
              theta.values.begin() + pos + layer.b.size(), layer.b.begin());
    pos += layer.b.size();
  }
}

namespace {

struct RowNorms {
  double max_l1 = 0.0;       // max_v |w_v|_1
  double frob_aug = 0.0;     // sqrt(sum_v (|(w_v,b_v)|_2 + 1)^2)
  double max_l2_row = 0.0;   // max_v |w_v|_2
};

RowNorms layer_norms(const Layer& layer) {
  RowNorms out;
  double frob_sq = 0.0;
  for (std::size_t r = 0; r < layer.w.rows(); ++r) {
    double l1 = 0.0, l2sq = 0.0;
    const double* row = layer.w.row(r);
    for (std::size_t c = 0; c < layer.w.cols(); ++c) {
      l1 += std::fabs(row[c]);
      l2sq += row[c] * row[c];
    }
    out.max_l1 = std::max(out.max_l1, l1);
    out.max_l2_row = std::max(out.max_l2_row, std::sqrt(l2sq));
    const double aug = std::sqrt(l2sq + layer.b[r] * layer.b[r]) + 1.0;
    frob_sq += aug * aug;
  }
  out.frob_aug = std::sqrt(frob_sq);
  return out;
}

}  // namespace

double lipschitz_budget(const ReluNetwork& net, double input_radius) {
  if (input_radius <= 0.0)
    throw std::invalid_argument("lipschitz_budget: input_radius > 0 required");
  double m = input_radius;  // bound on |y_{l-1}|_2
  double g = 0.0;           // bound on max_v |grad_theta a_v|_2 so far
  double l_max = 0.0;
  std::size_t prev_width = net.input_dim;
  for (const auto& layer : net.layers) {
    const RowNorms norms = layer_norms(layer);
    const double s = norms.max_l1 + std::sqrt(static_cast<double>(prev_width));
    g = (m + 1.0) + s * g;
    l_max = std::max(l_max, g);
    m = norms.frob_aug * (m + 1.0);
    prev_width = layer.out_dim();
  }
  return l_max;
}

double input_lipschitz_budget(const ReluNetwork& net) {
  double lin = 0.0;
  double l_max = 0.0;
  std::size_t prev_width = net.input_dim;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    const RowNorms norms = layer_norms(net.layers[l]);
    if (l == 0) {
      lin = norms.max_l2_row + 1.0;
    } else {
      lin = (norms.max_l1 + std::sqrt(static_cast<double>(prev_width))) * lin;
    }
    l_max = std::max(l_max, lin);
    prev_width = net.layers[l].out_dim();
  }
  return l_max;
}

double select_tau(double q, std::size_t r, int n) {
  if (q < 1.0 || r < 1) throw std::invalid_argument("select_tau: need q >= 1, r >= 1");
  return 1.0 / (q * std::sqrt(2.0 * static_cast<double>(r) * n));
}

SmoothingConfig make_smoothing_config(const ReluNetwork& net) {
  SmoothingConfig sc;
  sc.r = net.param_count();
  const double radius =
      (net.mode == TargetMode::Depth3) ? 2.0 * net.n : net.n + 1.0;
  sc.q = 4.0 * lipschitz_budget(net, radius);
  sc.tau = select_tau(sc.q, sc.r, net.n);
  if (net.mode == TargetMode::Depth2) {
    sc.q_in = 4.0 * input_lipschitz_budget(net);
    sc.omega = select_tau(sc.q_in, static_cast<std::size_t>(net.input_dim), net.n);
  }
  return sc;
}

ParamVector perturb_params(const ParamVector& theta, double tau, Rng& rng) {
  if (tau < 0.0) throw std::invalid_argument("perturb_params: tau >= 0 required");
  ParamVector out = theta;
  if (tau == 0.0) return out;
  for (auto& v : out.values) v += tau * rng.normal();
  return out;
}

std::vector<double> perturb_input(std::span<const double> z, double omega, Rng& rng) {
  if (omega < 0.0) throw std::invalid_argument("perturb_input: omega >= 0 required");
  std::vector<double> out(z.begin(), z.end());
  if (omega == 0.0) return out;
  for (auto& v : out) v += omega * rng.normal();
  return out;
}

ReluNetwork perturb_network(const ReluNetwork& net, double tau, Rng& rng) {
  ReluNetwork out = net;
  if (tau == 0.0) return out;
  for (auto& layer : out.layers) {
    for (auto& v : layer.w.data()) v += tau * rng.normal();
    for (auto& v : layer.b) v += tau * rng.normal();
  }
  return out;
}

MinSingularReport min_singular_check(const Matrix& w, double tau, double t,
                                     int trials, Rng& rng) {
  if (w.rows() != w.cols() || w.rows() == 0)
    throw std::invalid_argument("min_singular_check: W must be square");
  if (t < 0.0 || tau <= 0.0 || trials < 1)
    throw std::invalid_argument("min_singular_check: bad parameters");
  const int d = static_cast<int>(w.rows());
  MinSingularReport rep;
  rep.d = d;
  rep.tau = tau;
  rep.t = t;
  rep.trials = trials;
  rep.bound = std::min(1.0, 2.35 * t * std::sqrt(static_cast<double>(d)) / tau);
  Matrix perturbed(d, d);
  for (int trial = 0; trial < trials; ++trial) {
    for (std::size_t i = 0; i < perturbed.data().size(); ++i)
      perturbed.data()[i] = w.data()[i] + tau * rng.normal();
    if (min_singular_value(perturbed) <= t) ++rep.count_le_t;
  }
  rep.empirical_freq = static_cast<double>(rep.count_le_t) / trials;
  return rep;
}

nlohmann::json min_singular_report_to_json(const MinSingularReport& r) {
  return nlohmann::json{{"d", r.d},         {"tau", r.tau},
                        {"t", r.t},         {"trials", r.trials},
                        {"count_le_t", r.count_le_t},
                        {"empirical_freq", r.empirical_freq},
                        {"bound", r.bound}};
}

}  // namespace hardnet
