#include <cmath>

#include "doctest.h"
#include "hardnet/smoothing.hpp"
#include "hardnet/verify.hpp"

using namespace hardnet;

namespace {

ReluNetwork tiny_net(double w, double b) {
  ReluNetwork net;
  net.input_dim = 1;
  net.n = 2;
  Layer l;
  l.w = Matrix(1, 1);
  l.w.at(0, 0) = w;
  l.b = {b};
  net.layers.push_back(std::move(l));
  return net;
}

}  // namespace

TEST_CASE("flatten/unflatten round trip bit exactly") {
  Rng rng(41);
  Bits x(6);
  for (auto& b : x) b = rng.bernoulli(0.5) ? 1 : 0;
  auto net = assemble_depth3_target(Predicate::xor_k(2), x, 6);
  net = perturb_network(net, 1e-6, rng);
  const ParamVector theta = flatten_params(net);
  CHECK(theta.size() == net.param_count());
  ReluNetwork copy = net;
  for (auto& layer : copy.layers) {
    for (auto& v : layer.w.data()) v = 0.0;
    for (auto& v : layer.b) v = 0.0;
  }
  unflatten_params(theta, copy);
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    CHECK(copy.layers[l].w.data() == net.layers[l].w.data());
    CHECK(copy.layers[l].b == net.layers[l].b);
  }
}

TEST_CASE("lipschitz budget") {
  SUBCASE("single neuron: weight block R plus bias block 1") {
    CHECK(lipschitz_budget(tiny_net(2.0, 0.5), 10.0) == doctest::Approx(11.0));
    CHECK(lipschitz_budget(tiny_net(0.0, 0.0), 10.0) >= 1.0);
  }
  SUBCASE("monotone in the input radius") {
    Rng rng(42);
    Bits x(6);
    for (auto& b : x) b = rng.bernoulli(0.5) ? 1 : 0;
    const auto net = assemble_depth3_target(Predicate::xor_k(2), x, 6);
    CHECK(lipschitz_budget(net, 5.0) < lipschitz_budget(net, 10.0));
    CHECK(lipschitz_budget(net, 10.0) < lipschitz_budget(net, 20.0));
  }
}

TEST_CASE("tau selection") {
  CHECK(select_tau(1000.0, 10000, 100) == doctest::Approx(7.071067811865475e-07).epsilon(1e-12));
  CHECK(select_tau(1.0, 1, 2) == 0.5);
  SUBCASE("norm bound holds in every draw") {
    // q=10, r=100, n=50: P[|xi| > 1/q] <= exp(-25); 1e4 draws must all pass.
    const double q = 10.0, tau = select_tau(q, 100, 50);
    Rng rng(43);
    int violations = 0;
    for (int t = 0; t < 10000; ++t) {
      double s = 0.0;
      for (int i = 0; i < 100; ++i) {
        const double xi = tau * rng.normal();
        s += xi * xi;
      }
      if (std::sqrt(s) > 1.0 / q) ++violations;
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("parameter perturbation") {
  SUBCASE("tau = 0 is the identity") {
    ParamVector theta;
    theta.values = {1.0, -2.0, 0.25};
    Rng rng(44);
    CHECK(perturb_params(theta, 0.0, rng).values == theta.values);
  }
  SUBCASE("per-coordinate std matches tau") {
    ParamVector theta;
    theta.values.assign(100000, 0.0);
    Rng rng(45);
    const double tau = 0.5;
    const auto out = perturb_params(theta, tau, rng);
    double sum = 0.0, sq = 0.0;
    for (double v : out.values) {
      sum += v;
      sq += v * v;
    }
    const double mean = sum / out.values.size();
    const double sd = std::sqrt(sq / out.values.size());
    CHECK(std::fabs(sd - tau) < 0.02 * tau);
    CHECK(std::fabs(mean) < 3.0 * tau / std::sqrt(double(out.values.size())));
  }
}

TEST_CASE("input perturbation") {
  Rng rng(46);
  SUBCASE("omega = 0 is the identity") {
    const std::vector<double> z{0.0, 1.0, 1.0};
    CHECK(perturb_input(z, 0.0, rng) == z);
  }
  SUBCASE("smoothed Bernoulli keeps its mean") {
    const int n = 10, num = 100000;
    std::vector<double> z(num);
    for (auto& v : z) v = rng.bernoulli(1.0 / n) ? 0.0 : 1.0;
    const auto out = perturb_input(z, 0.05, rng);
    double mean = 0.0;
    for (double v : out) mean += v / num;
    // zero-mean noise: mean stays 1 - 1/n up to 3 sigma
    const double sigma = std::sqrt((0.1 * 0.9 + 0.05 * 0.05) / num);
    CHECK(std::fabs(mean - 0.9) < 3.0 * sigma);
  }
}

TEST_CASE("smoothing config uses the safety-factor rule") {
  Rng rng(47);
  Bits x(8);
  for (auto& b : x) b = rng.bernoulli(0.5) ? 1 : 0;
  const auto net = assemble_depth3_target(Predicate::xor_k(2), x, 8);
  const auto sc = make_smoothing_config(net);
  CHECK(sc.q == doctest::Approx(4.0 * lipschitz_budget(net, 16.0)));
  CHECK(sc.q >= std::ceil(2.0 * lipschitz_budget(net, 16.0)));
  CHECK(sc.tau == doctest::Approx(select_tau(sc.q, net.param_count(), 8)));
  CHECK(sc.omega == 0.0);
  const auto net2 = assemble_depth2_target(Predicate::xor_k(2), x, 8);
  const auto sc2 = make_smoothing_config(net2);
  CHECK(sc2.omega > 0.0);
}

TEST_CASE("minimum singular value monte carlo") {
  SUBCASE("bound formula") {
    Rng rng(48);
    Matrix w(50, 50);
    const auto rep = min_singular_check(w, 0.1, 1e-3, 200, rng);
    CHECK(rep.bound == doctest::Approx(0.16617009357883866).epsilon(1e-12));
    const double sigma = std::sqrt(rep.bound * (1 - rep.bound) / rep.trials);
    CHECK(rep.empirical_freq <= rep.bound + 3.0 * sigma);
  }
  SUBCASE("t = 0 never fires") {
    Rng rng(49);
    Matrix w(10, 10);
    CHECK(min_singular_check(w, 0.5, 0.0, 50, rng).empirical_freq == 0.0);
  }
  SUBCASE("d=1 gaussian cdf oracle") {
    // W=0, tau=1, t=0.5: P[|g| <= 0.5] = 0.38292492254802624.
    Rng rng(50);
    Matrix w(1, 1);
    const auto rep = min_singular_check(w, 1.0, 0.5, 2000, rng);
    CHECK(rep.bound == 1.0);  // min(1, 1.175)
    CHECK(std::fabs(rep.empirical_freq - 0.38292492254802624) <
          3.0 * std::sqrt(0.3829 * 0.6171 / 2000.0));
  }
  SUBCASE("non-square rejected") {
    Rng rng(51);
    Matrix w(3, 4);
    CHECK_THROWS_AS(min_singular_check(w, 0.1, 0.1, 10, rng), std::invalid_argument);
  }
}

TEST_CASE("pre-activation stability under the selected tau") {
  const auto rep =
      check_perturbation_stability(12, Predicate::xor_maj(1, 1), 20, 10, 99);
  CHECK(rep.pass);
  CHECK(rep.failures == 0);
}
