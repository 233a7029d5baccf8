#pragma once

#include <stdexcept>

#include "hardnet/dnf.hpp"
#include "hardnet/matrix.hpp"

namespace hardnet {

// Raised when a constructed network exceeds the n^3 parameter-magnitude
// budget; signals that n is below the regime floor of the construction.
class BoundViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Layer {
  Matrix w;  // out_dim x in_dim
  std::vector<double> b;
  bool activated = true;
  std::size_t out_dim() const { return b.size(); }
};

// Half-open index range of neurons within one layer.
struct NeuronGroup {
  int layer = -1;
  int begin = 0;
  int end = 0;
  int size() const { return end - begin; }
  bool empty() const { return layer < 0 || begin >= end; }
};

enum class TargetMode { Depth3, Depth2 };

struct ReluNetwork {
  int input_dim = 0;
  std::vector<Layer> layers;
  // Gate groups: e1 detects DNF satisfaction, e2 encoding invalidity, e3
  // coordinates inside the ambiguous threshold interval (depth-3 only).
  NeuronGroup e1, e2, e3;
  int n = 0, k = 0;
  double c = 0.0;
  TargetMode mode = TargetMode::Depth3;

  double output_bias() const { return layers.back().b[0]; }
  std::size_t param_count() const;
  double max_abs_param() const;
  std::size_t hidden_neurons() const;
};

struct EvalTrace {
  std::vector<std::vector<double>> pre;  // per-layer neuron inputs (post-bias)
  double output = 0.0;
};

// Exact f64 forward pass recording every neuron input. The input may be
// shorter than input_dim; missing trailing coordinates count as zero (the
// padding-free fast path relies on this).
EvalTrace forward_eval(const ReluNetwork& net, std::span<const double> input);
double forward_value(const ReluNetwork& net, std::span<const double> input);

// Output of the network with the e1/e2 gates and their weights removed.
// Whenever those gates are silent this equals the full output bit for bit.
double eval_n3_branch(const ReluNetwork& net, std::span<const double> input);

// --- gadget fragments ---

// Per-coordinate soft threshold: gain * ([t-c]+ - [t-(c+step)]+) with
// step = 1/n^2 and gain = n^2. Equals 0 for t <= c and 1 for t >= c+step.
struct ThresholdUnit {
  double c = 0.0;
  double step = 0.0;
  double gain = 0.0;
  double value(double t) const;
};
ThresholdUnit build_threshold_layer(int n, int k, double c);

// Affine rows over {0,1}^kn.
struct AffineFragment {
  Matrix w;
  std::vector<double> b;
};

// Row per DNF term: 3 on the term's positions, bias -3|I|+2. Exactly 2 when
// the term is satisfied, at most -1 otherwise (on binary inputs).
AffineFragment build_dnf_affine_layer(const DnfFormula& f, int kn);

// 2k+n rows: per-slice multiple-zero check, per-slice missing-zero check,
// per-vertex duplicate check. All rows <= -1 exactly on encodings, some row
// >= 2 otherwise (on binary inputs).
AffineFragment build_validity_layer(int n, int k);

// Per-coordinate trapezoid: 2 on (c, c+1/n^2), -1 outside (c-1/n^2, c+2/n^2),
// linear in between.
struct IntervalUnit {
  double c = 0.0;
  double n2inv = 0.0;
  double gain = 0.0;
  double value(double t) const;
};
IntervalUnit build_interval_detector(int n, int k, double c);

// Depth-3 target on R^{n^2}: a shared first layer of four hinge neurons per
// encoding coordinate, a gate layer e1|e2|e3 reading them, and one output
// neuron with incoming weights -1 and bias 1.
ReluNetwork assemble_depth3_target(const Predicate& p, const Bits& x, int n);

// Depth-2 target: e1|e2 affine gates directly on the (binary) input, then the
// output neuron.
ReluNetwork assemble_depth2_target(const Predicate& p, const Bits& x, int n);

struct NetworkAudit {
  std::size_t hidden_neurons = 0;
  double max_param = 0.0;
  bool neuron_count_ok = true;  // hidden <= n^2
  bool magnitude_ok = true;     // max |param| <= n^3
  std::vector<std::string> regime_flags;
};
NetworkAudit audit_network(const ReluNetwork& net);

nlohmann::json network_to_json(const ReluNetwork& net);
ReluNetwork network_from_json(const nlohmann::json& j);

}  // namespace hardnet
