#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hardnet/verify.hpp"

namespace py = pybind11;
using namespace hardnet;

namespace {

// Owning oracle wrapper: OracleState keeps pointers into the challenge and
// network, so both live here.
struct PyOracle {
  ChallengeSequence challenge;
  ReluNetwork net;
  OracleState state;

  PyOracle(ChallengeSequence ch, ReluNetwork n, const std::string& mode,
           double omega, bool dense, std::uint64_t seed)
      : challenge(std::move(ch)), net(std::move(n)) {
    state = make_oracle(challenge, net,
                        mode == "theorem2" ? OracleMode::Theorem2 : OracleMode::Theorem1,
                        omega, dense, seed);
  }

  py::tuple next() {
    const LabeledExample ex = gen_example(state);
    return py::make_tuple(ex.input, ex.label, std::string(case_tag_name(ex.tag)));
  }
};

ExperimentConfig config_from_py(const py::dict& d) {
  nlohmann::json j;
  for (auto item : d) {
    const auto key = item.first.cast<std::string>();
    if (py::isinstance<py::bool_>(item.second)) {
      j[key] = item.second.cast<bool>();
    } else if (py::isinstance<py::int_>(item.second)) {
      j[key] = item.second.cast<std::int64_t>();
    } else if (py::isinstance<py::float_>(item.second)) {
      j[key] = item.second.cast<double>();
    } else {
      j[key] = item.second.cast<std::string>();
    }
  }
  return config_from_json(j);
}

py::dict decision_to_py(const Decision& d) {
  py::dict out;
  out["verdict"] = d.verdict;
  out["loss"] = d.loss;
  out["threshold"] = d.threshold;
  out["holdout_size"] = d.holdout_size;
  out["b_hat"] = d.b_hat;
  out["tau"] = d.tau;
  out["regime_flags"] = d.regime_flags;
  py::dict cases;
  for (const auto& [name, stat] : d.breakdown)
    cases[name.c_str()] = py::make_tuple(stat.count, stat.loss_sum);
  out["case_breakdown"] = cases;
  return out;
}

py::dict report_to_py(const VerifyReport& r) {
  py::dict out;
  out["lemma_id"] = r.lemma_id;
  out["trials"] = r.trials;
  out["failures"] = r.failures;
  out["bound"] = r.bound;
  out["empirical"] = r.empirical;
  out["regime_ok"] = r.regime_ok;
  out["pass"] = r.pass;
  out["note"] = r.note;
  return out;
}

}  // namespace

PYBIND11_MODULE(hardnet, m) {
  m.doc() = "Hard-to-learn ReLU networks from local pseudorandom generators";

  py::class_<Hyperedge>(m, "Hyperedge")
      .def(py::init([](std::vector<int> members) {
        return Hyperedge{std::move(members)};
      }))
      .def_readonly("members", &Hyperedge::members)
      .def("__repr__", [](const Hyperedge& e) {
        std::string s = "Hyperedge([";
        for (std::size_t i = 0; i < e.members.size(); ++i)
          s += (i ? "," : "") + std::to_string(e.members[i]);
        return s + "])";
      });

  py::class_<Hypergraph>(m, "Hypergraph")
      .def_readonly("n", &Hypergraph::n)
      .def_readonly("k", &Hypergraph::k)
      .def_readonly("edges", &Hypergraph::edges)
      .def_property_readonly("m", &Hypergraph::m);

  py::class_<Predicate>(m, "Predicate")
      .def_static("parse", &Predicate::parse)
      .def_static("xor_k", &Predicate::xor_k)
      .def_static("maj_k", &Predicate::maj_k)
      .def_static("xor_maj", &Predicate::xor_maj)
      .def_readonly("k", &Predicate::k)
      .def_readonly("table", &Predicate::table);

  py::class_<ChallengeSequence>(m, "ChallengeSequence")
      .def_readonly("graph", &ChallengeSequence::graph)
      .def_readonly("labels", &ChallengeSequence::labels)
      .def_property_readonly("kind",
                             [](const ChallengeSequence& ch) {
                               return ch.kind == ChallengeKind::Random
                                          ? "random"
                                          : "pseudorandom";
                             })
      .def_property_readonly("secret",
                             [](const ChallengeSequence& ch) -> py::object {
                               if (!ch.secret) return py::none();
                               return py::cast(*ch.secret);
                             })
      .def("without_secret", &ChallengeSequence::without_secret)
      .def("to_json", [](const ChallengeSequence& ch) {
        return challenge_to_json(ch).dump();
      });

  py::class_<ReluNetwork>(m, "ReluNetwork")
      .def_readonly("input_dim", &ReluNetwork::input_dim)
      .def_readonly("n", &ReluNetwork::n)
      .def_readonly("k", &ReluNetwork::k)
      .def_readonly("c", &ReluNetwork::c)
      .def_property_readonly("output_bias", &ReluNetwork::output_bias)
      .def_property_readonly("param_count", &ReluNetwork::param_count)
      .def_property_readonly("hidden_neurons", &ReluNetwork::hidden_neurons)
      .def("to_json", [](const ReluNetwork& n) { return network_to_json(n).dump(); });

  py::class_<PyOracle>(m, "Oracle")
      .def(py::init<ChallengeSequence, ReluNetwork, const std::string&, double, bool,
                    std::uint64_t>(),
           py::arg("challenge"), py::arg("net"), py::arg("mode") = "theorem1",
           py::arg("omega") = 0.0, py::arg("dense") = true, py::arg("seed") = 1)
      .def("next", &PyOracle::next)
      .def_property_readonly("cursor",
                             [](const PyOracle& o) { return o.state.cursor; });

  m.def("sample_hypergraph",
        [](int n, int m, int k, std::uint64_t seed) {
          Rng rng(seed);
          return sample_hypergraph(n, m, k, rng);
        },
        py::arg("n"), py::arg("m"), py::arg("k"), py::arg("seed") = 1);
  m.def("encode_hyperedge", &encode_hyperedge);
  m.def("decode_encoding", [](const Bits& z, int n, int k) -> py::object {
    const auto s = decode_encoding(z, n, k);
    if (!s) return py::none();
    return py::cast(*s);
  });
  m.def("psi_threshold_map", [](const std::vector<double>& z, double c) {
    return psi_threshold_map(z, c);
  });
  m.def("eval_predicate",
        [](const Predicate& p, const Bits& bits) { return eval_predicate(p, bits); });
  m.def("prg_output", &prg_output);
  m.def("p_x_eval", &p_x_eval);
  m.def("sample_challenge",
        [](const Predicate& p, int n, int m, const std::string& kind,
           std::uint64_t seed, bool retain_secret) {
          Rng rng(seed);
          return sample_challenge(
              p, n, m, kind == "random" ? ChallengeKind::Random : ChallengeKind::Pseudorandom,
              rng, retain_secret);
        },
        py::arg("predicate"), py::arg("n"), py::arg("m"), py::arg("kind"),
        py::arg("seed") = 1, py::arg("retain_secret") = true);
  m.def("compile_predicate_dnf",
        [](const Predicate& p, const Bits& x, int n) {
          return compile_predicate_dnf(p, x, n).terms;
        });
  m.def("eval_dnf", [](int width, const std::vector<std::vector<int>>& terms,
                       const Bits& z) {
    DnfFormula f;
    f.width = width;
    f.terms = terms;
    return eval_dnf(f, z);
  });
  m.def("assemble_depth3_target", &assemble_depth3_target);
  m.def("assemble_depth2_target", &assemble_depth2_target);
  m.def("forward_value", [](const ReluNetwork& net, const std::vector<double>& x) {
    return forward_value(net, x);
  });
  m.def("forward_trace", [](const ReluNetwork& net, const std::vector<double>& x) {
    const EvalTrace t = forward_eval(net, x);
    return py::make_tuple(t.pre, t.output);
  });
  m.def("eval_n3_branch", [](const ReluNetwork& net, const std::vector<double>& x) {
    return eval_n3_branch(net, x);
  });
  m.def("perturb_network",
        [](const ReluNetwork& net, double tau, std::uint64_t seed) {
          Rng rng(seed);
          return perturb_network(net, tau, rng);
        },
        py::arg("net"), py::arg("tau"), py::arg("seed") = 1);
  m.def("rule_smoothing", [](const ReluNetwork& net) {
    const auto sc = make_smoothing_config(net);
    py::dict d;
    d["tau"] = sc.tau;
    d["omega"] = sc.omega;
    d["q"] = sc.q;
    d["r"] = sc.r;
    return d;
  });
  m.def("select_tau", &select_tau);
  m.def("lipschitz_budget", &lipschitz_budget);
  m.def("threshold_c", &threshold_c);
  m.def("inv_normal_cdf", &inv_normal_cdf);
  m.def("estimate_hyperedge_prob", [](int n, int k) {
    const auto p = estimate_hyperedge_prob(n, k);
    return py::make_tuple(p.closed_form, p.lower_bound, p.regime_ok);
  });
  m.def("prob_z_good_analytic", &prob_z_good_analytic);
  m.def("min_singular_check", [](int d, double tau, double t, int trials,
                                 std::uint64_t seed) {
    Rng rng(seed);
    Matrix w(d, d);
    for (auto& v : w.data()) v = rng.normal();
    const auto rep = min_singular_check(w, tau, t, trials, rng);
    return py::make_tuple(rep.empirical_freq, rep.bound);
  });
  m.def("run_trials", [](const py::dict& cfg_dict, const std::string& kind) {
    const ExperimentConfig cfg = config_from_py(cfg_dict);
    const auto decisions = run_trials(
        cfg, kind == "random" ? ChallengeKind::Random : ChallengeKind::Pseudorandom);
    py::list out;
    for (const auto& d : decisions) out.append(decision_to_py(d));
    return out;
  });
  m.def("network_from_json", [](const std::string& text) {
    return network_from_json(nlohmann::json::parse(text));
  });
  m.def("challenge_from_json", [](const std::string& text) {
    return challenge_from_json(nlohmann::json::parse(text));
  });
  m.def("verify_lemma", [](const std::string& id, int n, int k,
                           const std::string& predicate, long trials, long samples,
                           std::uint64_t seed) {
    VerifyOptions opt;
    opt.n = n;
    opt.k = k;
    opt.predicate = predicate;
    opt.trials = trials;
    opt.samples = samples;
    opt.seed = seed;
    return report_to_py(run_verify_lemma(id, opt));
  },
        py::arg("id"), py::arg("n") = 10, py::arg("k") = 2,
        py::arg("predicate") = "", py::arg("trials") = 10,
        py::arg("samples") = 4000, py::arg("seed") = 1);
  m.def("lemma_ids", [] { return lemma_ids(); });
}
