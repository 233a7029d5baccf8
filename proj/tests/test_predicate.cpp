#include <cmath>

#include "doctest.h"
#include "hardnet/predicate.hpp"

using namespace hardnet;

TEST_CASE("predicate tables") {
  SUBCASE("xor2 truth table") {
    const auto p = Predicate::xor_k(2);
    CHECK(p.table == Bits{0, 1, 1, 0});
    CHECK(eval_predicate(p, Bits{1, 1}) == 0);
    CHECK(eval_predicate(p, Bits{1, 0}) == 1);
  }
  SUBCASE("maj3") {
    const auto p = Predicate::maj_k(3);
    CHECK(eval_predicate(p, Bits{1, 0, 1}) == 1);
    CHECK(eval_predicate(p, Bits{0, 0, 1}) == 0);
  }
  SUBCASE("constructors agree with a direct formula evaluation") {
    const auto p = Predicate::xor_maj(2, 3);
    REQUIRE(p.k == 5);
    Bits bits(5);
    for (int mask = 0; mask < 32; ++mask) {
      int parity = 0, count = 0;
      for (int j = 0; j < 5; ++j) {
        bits[j] = (mask >> (4 - j)) & 1;  // big-endian indexing
        if (j < 2) parity ^= bits[j];
        else count += bits[j];
      }
      const int expect = parity ^ (count > 1 ? 1 : 0);  // maj3: sum > 3/2
      CHECK(eval_predicate(p, bits) == expect);
    }
  }
  SUBCASE("arity mismatch") {
    CHECK_THROWS_AS(eval_predicate(Predicate::xor_k(2), Bits{1}), std::invalid_argument);
  }
  SUBCASE("parse") {
    CHECK(Predicate::parse("xor:3").table == Predicate::xor_k(3).table);
    CHECK(Predicate::parse("xormaj:2:3").table == Predicate::xor_maj(2, 3).table);
    CHECK(Predicate::parse("table:0110").table == Bits{0, 1, 1, 0});
    CHECK_THROWS_AS(Predicate::parse("nope"), std::invalid_argument);
  }
}

TEST_CASE("prg output") {
  SUBCASE("constant-1 predicate gives all ones") {
    Rng rng(3);
    const auto g = sample_hypergraph(6, 40, 2, rng);
    const Bits x{0, 1, 1, 0, 1, 0};
    CHECK(prg_output(Predicate::constant(2, 1), g, x) == Bits(40, 1));
  }
  SUBCASE("worked xor example") {
    Hypergraph g;
    g.n = 4;
    g.k = 2;
    g.edges = {Hyperedge{{0, 1}}};  // (1,2) in 1-based notation
    CHECK(prg_output(Predicate::xor_k(2), g, Bits{0, 1, 1, 0}) == Bits{1});
  }
  SUBCASE("matches per-edge predicate evaluation for every seed, n=6 k=2") {
    Rng rng(4);
    const auto g = sample_hypergraph(6, 30, 2, rng);
    const auto p = Predicate::xor_maj(1, 1);
    Bits x(6);
    for (int mask = 0; mask < 64; ++mask) {
      for (int i = 0; i < 6; ++i) x[i] = (mask >> i) & 1;
      const Bits out = prg_output(p, g, x);
      for (int j = 0; j < g.m(); ++j) {
        Bits restricted{x[g.edges[j].members[0]], x[g.edges[j].members[1]]};
        CHECK(out[j] == eval_predicate(p, restricted));
      }
    }
  }
}

TEST_CASE("p_x on encodings") {
  SUBCASE("and2 with all-ones seed is constantly 1") {
    Bits t_and{0, 0, 0, 1};
    const auto p = Predicate::from_table(2, t_and);
    const Bits x(5, 1);
    Rng rng(9);
    for (int i = 0; i < 20; ++i) {
      const auto g = sample_hypergraph(5, 1, 2, rng);
      CHECK(p_x_eval(p, x, encode_hyperedge(g.edges[0], 5)) == 1);
    }
  }
  SUBCASE("worked xor example") {
    Bits x{1, 0, 1, 1, 0};
    // S = (1,2) 1-based: x_1 xor x_2 = 1
    CHECK(p_x_eval(Predicate::xor_k(2), x, encode_hyperedge(Hyperedge{{0, 1}}, 5)) == 1);
  }
  SUBCASE("non-encoding input") {
    CHECK_THROWS_AS(p_x_eval(Predicate::xor_k(2), Bits{1, 0, 1}, Bits{1, 1, 1, 1, 1, 0}),
                    std::domain_error);
  }
}

TEST_CASE("challenge sampling") {
  SUBCASE("random labels are fair") {
    Rng rng(11);
    const auto ch = sample_challenge(Predicate::xor_k(2), 10, 100000,
                                     ChallengeKind::Random, rng);
    long ones = 0;
    for (auto b : ch.labels) ones += b;
    const double mean = static_cast<double>(ones) / ch.labels.size();
    CHECK(std::fabs(mean - 0.5) < 3.0 * std::sqrt(0.25 / ch.labels.size()));
    CHECK_FALSE(ch.secret.has_value());
  }
  SUBCASE("pseudorandom with constant-0 predicate is all zeros") {
    Rng rng(12);
    const auto ch = sample_challenge(Predicate::constant(3, 0), 10, 500,
                                     ChallengeKind::Pseudorandom, rng);
    CHECK(ch.labels == Bits(500, 0));
    REQUIRE(ch.secret.has_value());
    CHECK(ch.secret->size() == 10);
  }
  SUBCASE("labels reproduce the generator on the secret") {
    Rng rng(13);
    const auto p = Predicate::xor_maj(1, 2);
    const auto ch = sample_challenge(p, 12, 300, ChallengeKind::Pseudorandom, rng);
    CHECK(ch.labels == prg_output(p, ch.graph, *ch.secret));
  }
  SUBCASE("deterministic given the seed") {
    Rng r1(14), r2(14);
    const auto a = sample_challenge(Predicate::xor_k(2), 9, 50,
                                    ChallengeKind::Pseudorandom, r1);
    const auto b = sample_challenge(Predicate::xor_k(2), 9, 50,
                                    ChallengeKind::Pseudorandom, r2);
    CHECK(a.graph == b.graph);
    CHECK(a.labels == b.labels);
    CHECK(a.secret == b.secret);
  }
  SUBCASE("json round trip") {
    Rng rng(15);
    const auto ch = sample_challenge(Predicate::xor_k(3), 8, 40,
                                     ChallengeKind::Pseudorandom, rng);
    const auto back = challenge_from_json(challenge_to_json(ch));
    CHECK(back.graph == ch.graph);
    CHECK(back.labels == ch.labels);
    CHECK(back.secret == ch.secret);
    CHECK(back.kind == ch.kind);
  }
}
