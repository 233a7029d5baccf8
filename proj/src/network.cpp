#include "hardnet/network.hpp"

#include <algorithm>
#include <cmath>

#include "hardnet/numerics.hpp"

namespace hardnet {

namespace {

double relu(double t) { return t > 0.0 ? t : 0.0; }

double dot_prefix(const double* row, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += row[i] * x[i];
  return s;
}

}  // namespace

std::size_t ReluNetwork::param_count() const {
  std::size_t r = 0;
  for (const auto& layer : layers) r += layer.w.size() + layer.b.size();
  return r;
}

double ReluNetwork::max_abs_param() const {
  double m = 0.0;
  for (const auto& layer : layers) {
    for (double v : layer.w.data()) m = std::max(m, std::fabs(v));
    for (double v : layer.b) m = std::max(m, std::fabs(v));
  }
  return m;
}

std::size_t ReluNetwork::hidden_neurons() const {
  std::size_t h = 0;
  for (std::size_t i = 0; i + 1 < layers.size(); ++i) h += layers[i].out_dim();
  return h;
}

EvalTrace forward_eval(const ReluNetwork& net, std::span<const double> input) {
  if (input.size() > static_cast<std::size_t>(net.input_dim))
    throw std::invalid_argument("forward_eval: input longer than input_dim");
  EvalTrace trace;
  trace.pre.reserve(net.layers.size());
  std::vector<double> cur(input.begin(), input.end());
  std::vector<double> next;
  for (const auto& layer : net.layers) {
    const std::size_t out = layer.out_dim();
    next.assign(out, 0.0);
    for (std::size_t r = 0; r < out; ++r)
      next[r] = dot_prefix(layer.w.row(r), cur) + layer.b[r];
    trace.pre.push_back(next);
    if (layer.activated)
      for (auto& v : next) v = relu(v);
    cur.swap(next);
  }
  trace.output = cur.at(0);
  return trace;
}

double forward_value(const ReluNetwork& net, std::span<const double> input) {
  if (input.size() > static_cast<std::size_t>(net.input_dim))
    throw std::invalid_argument("forward_value: input longer than input_dim");
  std::vector<double> cur(input.begin(), input.end());
  std::vector<double> next;
  for (const auto& layer : net.layers) {
    const std::size_t out = layer.out_dim();
    next.assign(out, 0.0);
    for (std::size_t r = 0; r < out; ++r) {
      double v = dot_prefix(layer.w.row(r), cur) + layer.b[r];
      next[r] = layer.activated ? relu(v) : v;
    }
    cur.swap(next);
  }
  return cur.at(0);
}

double eval_n3_branch(const ReluNetwork& net, std::span<const double> input) {
  if (net.e3.empty() || net.layers.size() != 3)
    throw std::invalid_argument("eval_n3_branch: network has no e3 group");
  const auto& hinges = net.layers[0];
  const auto& gates = net.layers[1];
  const auto& out = net.layers[2];
  std::vector<double> h(hinges.out_dim());
  for (std::size_t r = 0; r < h.size(); ++r)
    h[r] = relu(dot_prefix(hinges.w.row(r), input) + hinges.b[r]);
  // Same accumulation order as the full pass; the skipped gate terms are
  // exactly zero whenever e1/e2 are silent, so the sums agree bit for bit.
  double acc = out.b[0];
  for (int r = net.e3.begin; r < net.e3.end; ++r) {
    const double gate = relu(dot_prefix(gates.w.row(r), h) + gates.b[r]);
    acc += out.w.at(0, r) * gate;
  }
  return out.activated ? relu(acc) : acc;
}

double ThresholdUnit::value(double t) const {
  return gain * (relu(t - c) - relu(t - (c + step)));
}

ThresholdUnit build_threshold_layer(int n, int k, double c) {
  if (n < 1) throw std::invalid_argument("build_threshold_layer: n >= 1");
  (void)k;
  const double n2 = static_cast<double>(n) * n;
  return ThresholdUnit{c, 1.0 / n2, n2};
}

AffineFragment build_dnf_affine_layer(const DnfFormula& f, int kn) {
  if (f.width != kn) throw std::invalid_argument("build_dnf_affine_layer: width mismatch");
  AffineFragment frag;
  frag.w = Matrix(f.terms.size(), kn);
  frag.b.resize(f.terms.size());
  for (std::size_t j = 0; j < f.terms.size(); ++j) {
    for (int idx : f.terms[j]) frag.w.at(j, idx) = 3.0;
    frag.b[j] = -3.0 * static_cast<double>(f.terms[j].size()) + 2.0;
  }
  return frag;
}

AffineFragment build_validity_layer(int n, int k) {
  const int kn = k * n;
  AffineFragment frag;
  frag.w = Matrix(2 * k + n, kn);
  frag.b.resize(2 * k + n);
  int row = 0;
  // slice i holds zeros at >= 2 positions
  for (int i = 0; i < k; ++i, ++row) {
    for (int j = 0; j < n; ++j) frag.w.at(row, i * n + j) = -3.0;
    frag.b[row] = 3.0 * n - 4.0;
  }
  // slice i holds no zero
  for (int i = 0; i < k; ++i, ++row) {
    for (int j = 0; j < n; ++j) frag.w.at(row, i * n + j) = 3.0;
    frag.b[row] = -3.0 * n + 2.0;
  }
  // vertex j marked by >= 2 slices
  for (int j = 0; j < n; ++j, ++row) {
    for (int i = 0; i < k; ++i) frag.w.at(row, i * n + j) = -3.0;
    frag.b[row] = 3.0 * k - 4.0;
  }
  return frag;
}

double IntervalUnit::value(double t) const {
  return gain * (relu(t - (c - n2inv)) - relu(t - c)) -
         gain * (relu(t - (c + n2inv)) - relu(t - (c + 2.0 * n2inv))) - 1.0;
}

IntervalUnit build_interval_detector(int n, int k, double c) {
  (void)k;
  const double n2 = static_cast<double>(n) * n;
  return IntervalUnit{c, 1.0 / n2, 3.0 * n2};
}

namespace {

void enforce_magnitude_budget(const ReluNetwork& net) {
  const double budget = std::pow(static_cast<double>(net.n), 3.0);
  const double mx = net.max_abs_param();
  if (mx > budget)
    throw BoundViolation("parameter magnitude " + std::to_string(mx) +
                         " exceeds n^3 = " + std::to_string(budget) +
                         " (n too small for the construction)");
}

}  // namespace

ReluNetwork assemble_depth3_target(const Predicate& p, const Bits& x, int n) {
  const int k = p.k;
  if (static_cast<std::size_t>(n) != x.size())
    throw std::invalid_argument("assemble_depth3_target: x length != n");
  if (k > n) throw std::invalid_argument("assemble_depth3_target: need k <= n");
  const int kn = k * n;
  const double c = threshold_c(n);
  const double n2 = static_cast<double>(n) * n;
  const double step = 1.0 / n2;

  ReluNetwork net;
  net.input_dim = n * n;
  net.n = n;
  net.k = k;
  net.c = c;
  net.mode = TargetMode::Depth3;

  // Layer 1: four hinge neurons per encoding coordinate, at offsets
  // c - 1/n^2, c, c + 1/n^2, c + 2/n^2. The threshold map uses the middle
  // two, the interval detector all four.
  const double offsets[4] = {c - step, c, c + step, c + 2.0 * step};
  Layer l1;
  l1.w = Matrix(4 * kn, net.input_dim);
  l1.b.resize(4 * kn);
  for (int i = 0; i < kn; ++i) {
    for (int o = 0; o < 4; ++o) {
      l1.w.at(4 * i + o, i) = 1.0;
      l1.b[4 * i + o] = -offsets[o];
    }
  }
  auto hinge = [](int coord, int o) { return 4 * coord + o; };

  const DnfFormula psi = compile_predicate_dnf(p, x, n);
  const int t_count = static_cast<int>(psi.terms.size());
  const int v_count = 2 * k + n;
  const int gate_count = t_count + v_count + kn;

  Layer l2;
  l2.w = Matrix(gate_count, 4 * kn);
  l2.b.resize(gate_count);
  // A binary coordinate value is n^2*(hinge(c) - hinge(c+1/n^2)); a gate row
  // with coefficient beta on bit i becomes beta*n^2 on those two hinges.
  auto add_bit_coeff = [&](int row, int coord, double beta) {
    l2.w.at(row, hinge(coord, 1)) += beta * n2;
    l2.w.at(row, hinge(coord, 2)) -= beta * n2;
  };
  int row = 0;
  for (int j = 0; j < t_count; ++j, ++row) {
    for (int idx : psi.terms[j]) add_bit_coeff(row, idx, 3.0);
    l2.b[row] = -3.0 * static_cast<double>(psi.terms[j].size()) + 2.0;
  }
  const AffineFragment validity = build_validity_layer(n, k);
  for (int v = 0; v < v_count; ++v, ++row) {
    for (int i = 0; i < kn; ++i) {
      const double beta = validity.w.at(v, i);
      if (beta != 0.0) add_bit_coeff(row, i, beta);
    }
    l2.b[row] = validity.b[v];
  }
  for (int i = 0; i < kn; ++i, ++row) {
    l2.w.at(row, hinge(i, 0)) = 3.0 * n2;
    l2.w.at(row, hinge(i, 1)) = -3.0 * n2;
    l2.w.at(row, hinge(i, 2)) = -3.0 * n2;
    l2.w.at(row, hinge(i, 3)) = 3.0 * n2;
    l2.b[row] = -1.0;
  }

  Layer l3;
  l3.w = Matrix(1, gate_count);
  for (int r = 0; r < gate_count; ++r) l3.w.at(0, r) = -1.0;
  l3.b = {1.0};

  net.layers = {std::move(l1), std::move(l2), std::move(l3)};
  net.e1 = {1, 0, t_count};
  net.e2 = {1, t_count, t_count + v_count};
  net.e3 = {1, t_count + v_count, gate_count};
  enforce_magnitude_budget(net);
  return net;
}

ReluNetwork assemble_depth2_target(const Predicate& p, const Bits& x, int n) {
  const int k = p.k;
  if (static_cast<std::size_t>(n) != x.size())
    throw std::invalid_argument("assemble_depth2_target: x length != n");
  if (k > n) throw std::invalid_argument("assemble_depth2_target: need k <= n");
  const int kn = k * n;

  ReluNetwork net;
  net.input_dim = n * n;
  net.n = n;
  net.k = k;
  net.c = 0.0;
  net.mode = TargetMode::Depth2;

  const DnfFormula psi = compile_predicate_dnf(p, x, n);
  const AffineFragment dnf_rows = build_dnf_affine_layer(psi, kn);
  const AffineFragment validity = build_validity_layer(n, k);
  const int t_count = static_cast<int>(psi.terms.size());
  const int v_count = 2 * k + n;

  Layer l1;
  l1.w = Matrix(t_count + v_count, net.input_dim);
  l1.b.resize(t_count + v_count);
  for (int r = 0; r < t_count; ++r) {
    for (int i = 0; i < kn; ++i) l1.w.at(r, i) = dnf_rows.w.at(r, i);
    l1.b[r] = dnf_rows.b[r];
  }
  for (int v = 0; v < v_count; ++v) {
    for (int i = 0; i < kn; ++i) l1.w.at(t_count + v, i) = validity.w.at(v, i);
    l1.b[t_count + v] = validity.b[v];
  }

  Layer l2;
  l2.w = Matrix(1, t_count + v_count);
  for (int r = 0; r < t_count + v_count; ++r) l2.w.at(0, r) = -1.0;
  l2.b = {1.0};

  net.layers = {std::move(l1), std::move(l2)};
  net.e1 = {0, 0, t_count};
  net.e2 = {0, t_count, t_count + v_count};
  net.e3 = {};
  enforce_magnitude_budget(net);
  return net;
}

NetworkAudit audit_network(const ReluNetwork& net) {
  NetworkAudit audit;
  audit.hidden_neurons = net.hidden_neurons();
  audit.max_param = net.max_abs_param();
  const double n = net.n;
  audit.neuron_count_ok = audit.hidden_neurons <= static_cast<std::size_t>(n * n);
  audit.magnitude_ok = audit.max_param <= n * n * n;
  const double ln_n = std::log(n);
  if (!audit.neuron_count_ok)
    audit.regime_flags.push_back("hidden_neuron_count_exceeds_n_squared");
  if (!audit.magnitude_ok)
    audit.regime_flags.push_back("parameter_magnitude_exceeds_n_cubed");
  if (!net.e1.empty() && net.e1.size() > ln_n)
    audit.regime_flags.push_back("e1_gate_count_exceeds_log_n");
  if ((std::size_t{1} << net.k) > ln_n)
    audit.regime_flags.push_back("2^k_exceeds_log_n");
  return audit;
}

nlohmann::json network_to_json(const ReluNetwork& net) {
  nlohmann::json j;
  j["input_dim"] = net.input_dim;
  j["n"] = net.n;
  j["k"] = net.k;
  j["c"] = net.c;
  j["mode"] = (net.mode == TargetMode::Depth3) ? "theorem1" : "theorem2";
  auto group = [](const NeuronGroup& g) {
    return nlohmann::json{{"layer", g.layer}, {"begin", g.begin}, {"end", g.end}};
  };
  j["groups"] = {{"e1", group(net.e1)}, {"e2", group(net.e2)}, {"e3", group(net.e3)}};
  auto layers = nlohmann::json::array();
  for (const auto& layer : net.layers) {
    nlohmann::json lj;
    auto rows = nlohmann::json::array();
    for (std::size_t r = 0; r < layer.w.rows(); ++r) {
      rows.push_back(std::vector<double>(layer.w.row(r), layer.w.row(r) + layer.w.cols()));
    }
    lj["w"] = std::move(rows);
    lj["b"] = layer.b;
    lj["activated"] = layer.activated;
    layers.push_back(std::move(lj));
  }
  j["layers"] = std::move(layers);
  return j;
}

ReluNetwork network_from_json(const nlohmann::json& j) {
  ReluNetwork net;
  net.input_dim = j.at("input_dim").get<int>();
  net.n = j.at("n").get<int>();
  net.k = j.at("k").get<int>();
  net.c = j.at("c").get<double>();
  net.mode = (j.at("mode").get<std::string>() == "theorem1") ? TargetMode::Depth3
                                                             : TargetMode::Depth2;
  auto group = [](const nlohmann::json& g) {
    return NeuronGroup{g.at("layer").get<int>(), g.at("begin").get<int>(),
                       g.at("end").get<int>()};
  };
  net.e1 = group(j.at("groups").at("e1"));
  net.e2 = group(j.at("groups").at("e2"));
  net.e3 = group(j.at("groups").at("e3"));
  std::size_t in_dim = net.input_dim;
  for (const auto& lj : j.at("layers")) {
    Layer layer;
    const auto& rows = lj.at("w");
    layer.b = lj.at("b").get<std::vector<double>>();
    layer.activated = lj.at("activated").get<bool>();
    layer.w = Matrix(rows.size(), in_dim);
    if (rows.size() != layer.b.size())
      throw std::invalid_argument("network_from_json: row/bias count mismatch");
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const auto row = rows[r].get<std::vector<double>>();
      if (row.size() != in_dim)
        throw std::invalid_argument("network_from_json: layer width mismatch");
      std::copy(row.begin(), row.end(), layer.w.row(r));
    }
    in_dim = layer.b.size();
    net.layers.push_back(std::move(layer));
  }
  return net;
}

}  // namespace hardnet
