#pragma once

#include <optional>
#include <string>

#include "hardnet/encoding.hpp"

namespace hardnet {

// A k-ary boolean predicate as a truth table. The input bits index the table
// big-endian: bit 0 is the most significant.
struct Predicate {
  int k = 0;
  Bits table;  // size 2^k

  static Predicate from_table(int k, Bits table);
  static Predicate constant(int k, int value);
  static Predicate xor_k(int k);
  static Predicate maj_k(int k);  // 1 iff sum of bits > k/2
  // (z_1 xor ... xor z_a) xor maj(z_{a+1},...,z_{a+b}); arity a+b.
  static Predicate xor_maj(int a, int b);
  static Predicate random_table(int k, Rng& rng);
  // Parses "xor:3", "maj:3", "xormaj:2:3", "const0:3", "const1:3",
  // "table:0110...".
  static Predicate parse(const std::string& spec);
  // The experiment default for a given arity: xormaj:2:3 at k=5, otherwise
  // xormaj:1:(k-1) (xor:1 at k=1).
  static Predicate default_for_arity(int k);

  std::string describe() const { return name.empty() ? "table:" + format_bits(table) : name; }
  std::string name;
};

int eval_predicate(const Predicate& p, const Bits& bits);
int eval_predicate(const Predicate& p, std::span<const std::uint8_t> bits);

// Goldreich generator output: bit j is P(x restricted to edge j).
Bits prg_output(const Predicate& p, const Hypergraph& g, const Bits& x);

// P_x on hyperedge encodings: decodes z and evaluates P(x_S). Throws
// domain_error when z is not an encoding.
int p_x_eval(const Predicate& p, const Bits& x, const Bits& z);

enum class ChallengeKind { Random, Pseudorandom };

struct ChallengeSequence {
  Hypergraph graph;
  Bits labels;  // length m
  ChallengeKind kind = ChallengeKind::Random;
  // Seed of the generator; kept only for pseudorandom challenges generated in
  // verification mode. The distinguisher path never reads it.
  std::optional<Bits> secret;

  ChallengeSequence without_secret() const;
};

// Fresh graph from the (n,m,k) edge distribution in both cases; labels are
// iid fair bits (random) or the generator image of a uniform secret
// (pseudorandom).
ChallengeSequence sample_challenge(const Predicate& p, int n, int m,
                                   ChallengeKind kind, Rng& rng,
                                   bool retain_secret = true);

nlohmann::json challenge_to_json(const ChallengeSequence& ch);
ChallengeSequence challenge_from_json(const nlohmann::json& j);

}  // namespace hardnet
