#include <cmath>
#include <set>

#include "doctest.h"
#include "hardnet/encoding.hpp"

using namespace hardnet;

TEST_CASE("hypergraph sampling basics") {
  Rng rng(1);
  SUBCASE("n=1 k=1 forces the single edge") {
    const auto g = sample_hypergraph(1, 2, 1, rng);
    CHECK(g.edges[0].members == std::vector<int>{0});
    CHECK(g.edges[1].members == std::vector<int>{0});
  }
  SUBCASE("n=k forces permutations") {
    const auto g = sample_hypergraph(3, 1000, 3, rng);
    for (const auto& e : g.edges) {
      std::set<int> s(e.members.begin(), e.members.end());
      CHECK(s == std::set<int>{0, 1, 2});
    }
  }
  SUBCASE("k > n rejected") { CHECK_THROWS_AS(sample_hypergraph(2, 1, 3, rng), std::invalid_argument); }
  SUBCASE("same seed, same graph") {
    Rng r1(77), r2(77);
    CHECK(sample_hypergraph(9, 50, 3, r1) == sample_hypergraph(9, 50, 3, r2));
  }
}

TEST_CASE("edge distribution is uniform over ordered pairs") {
  // n=5, k=2: 20 ordered pairs; chi-square GOF on 1e5 edges,
  // threshold chi2(19 dof, 0.999) = 43.82.
  Rng rng(2024);
  const int m = 100000;
  const auto g = sample_hypergraph(5, m, 2, rng);
  std::map<std::pair<int, int>, int> counts;
  for (const auto& e : g.edges) ++counts[{e.members[0], e.members[1]}];
  CHECK(counts.size() == 20);
  const double expected = m / 20.0;
  double chi2 = 0.0;
  for (const auto& [pair, cnt] : counts) {
    const double d = cnt - expected;
    chi2 += d * d / expected;
  }
  CHECK(chi2 < 43.82);
}

TEST_CASE("hyperedge encoding") {
  SUBCASE("worked example") {
    // members (2,3) in 1-based notation
    const Bits z = encode_hyperedge(Hyperedge{{1, 2}}, 3);
    CHECK(z == Bits{1, 0, 1, 1, 1, 0});
    CHECK(format_encoding(z, 3) == "101|110");
  }
  SUBCASE("k=1") {
    CHECK(encode_hyperedge(Hyperedge{{0}}, 2) == Bits{0, 1});
  }
  SUBCASE("round trip over all 336 edges at n=8,k=3") {
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b)
        for (int c = 0; c < 8; ++c) {
          if (a == b || b == c || a == c) continue;
          const Hyperedge s{{a, b, c}};
          const auto back = decode_encoding(encode_hyperedge(s, 8), 8, 3);
          REQUIRE(back.has_value());
          CHECK(*back == s);
        }
  }
}

TEST_CASE("decode rejects exactly the non-encodings") {
  SUBCASE("worked rejections") {
    CHECK(decode_encoding(Bits{1, 0, 1, 1, 1, 0}, 3, 2).has_value());
    CHECK_FALSE(decode_encoding(Bits{1, 1, 1, 1, 1, 0}, 3, 2).has_value());  // no zero
    CHECK_FALSE(decode_encoding(Bits{0, 1, 1, 0, 1, 1}, 3, 2).has_value());  // duplicate
    CHECK_FALSE(decode_encoding(Bits{0, 0, 1, 1, 1, 0}, 3, 2).has_value());  // two zeros
  }
  SUBCASE("census over all 64 vectors at n=3,k=2") {
    int valid = 0;
    Bits z(6);
    for (int mask = 0; mask < 64; ++mask) {
      for (int i = 0; i < 6; ++i) z[i] = (mask >> i) & 1;
      if (decode_encoding(z, 3, 2)) ++valid;
    }
    CHECK(valid == 6);  // n(n-1)
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(decode_encoding(Bits{1, 0, 1}, 3, 2), std::invalid_argument);
  }
}

TEST_CASE("threshold map") {
  const std::vector<double> z{-3.0, 0.5};
  CHECK(psi_threshold_map(z, -2.326) == Bits{0, 1});
  const std::vector<double> ties{-2.326, -2.326};
  CHECK(psi_threshold_map(ties, -2.326) == Bits{1, 1});  // >= convention
}

TEST_CASE("bit string formatting") {
  const Bits b{1, 0, 1, 1};
  CHECK(format_bits(b) == "1011");
  CHECK(parse_bits("1011") == b);
  CHECK(parse_bits("10|11") == b);
  CHECK_THROWS_AS(parse_bits("10x1"), std::invalid_argument);
}

TEST_CASE("hypergraph json round trip") {
  Rng rng(5);
  const auto g = sample_hypergraph(7, 20, 3, rng);
  CHECK(hypergraph_from_json(hypergraph_to_json(g)) == g);
}
