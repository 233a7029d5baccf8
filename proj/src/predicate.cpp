#include "hardnet/predicate.hpp"

#include <stdexcept>

namespace hardnet {

namespace {

void check_arity(int k) {
  if (k < 1 || k > 20) throw std::invalid_argument("predicate arity must be in [1,20]");
}

std::size_t table_index(std::span<const std::uint8_t> bits) {
  std::size_t idx = 0;
  for (auto b : bits) idx = (idx << 1) | (b & 1);
  return idx;
}

}  // namespace

Predicate Predicate::from_table(int k, Bits table) {
  check_arity(k);
  if (table.size() != (std::size_t{1} << k))
    throw std::invalid_argument("predicate table must have 2^k entries");
  Predicate p;
  p.k = k;
  p.table = std::move(table);
  return p;
}

Predicate Predicate::constant(int k, int value) {
  auto p = from_table(k, Bits(std::size_t{1} << k, value ? 1 : 0));
  p.name = value ? "const1:" : "const0:";
  p.name += std::to_string(k);
  return p;
}

Predicate Predicate::xor_k(int k) {
  check_arity(k);
  Bits t(std::size_t{1} << k);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = __builtin_parityll(i);
  auto p = from_table(k, std::move(t));
  p.name = "xor:" + std::to_string(k);
  return p;
}

Predicate Predicate::maj_k(int k) {
  check_arity(k);
  Bits t(std::size_t{1} << k);
  for (std::size_t i = 0; i < t.size(); ++i)
    t[i] = (2 * __builtin_popcountll(i) > k) ? 1 : 0;
  auto p = from_table(k, std::move(t));
  p.name = "maj:" + std::to_string(k);
  return p;
}

Predicate Predicate::xor_maj(int a, int b) {
  if (a < 1 || b < 1) throw std::invalid_argument("xor_maj: need a,b >= 1");
  const int k = a + b;
  check_arity(k);
  Bits t(std::size_t{1} << k);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const std::size_t hi = i >> b;          // first a bits
    const std::size_t lo = i & ((1u << b) - 1);  // last b bits
    const int x = __builtin_parityll(hi);
    const int mj = (2 * __builtin_popcountll(lo) > b) ? 1 : 0;
    t[i] = x ^ mj;
  }
  auto p = from_table(k, std::move(t));
  p.name = "xormaj:" + std::to_string(a) + ":" + std::to_string(b);
  return p;
}

Predicate Predicate::random_table(int k, Rng& rng) {
  check_arity(k);
  Bits t(std::size_t{1} << k);
  for (auto& b : t) b = rng.bernoulli(0.5) ? 1 : 0;
  return from_table(k, std::move(t));
}

Predicate Predicate::parse(const std::string& spec) {
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
      const auto pos = s.find(':', start);
      if (pos == std::string::npos) {
        parts.push_back(s.substr(start));
        return parts;
      }
      parts.push_back(s.substr(start, pos - start));
      start = pos + 1;
    }
  };
  const auto parts = split(spec);
  const auto& head = parts[0];
  try {
    if (head == "xor" && parts.size() == 2) return xor_k(std::stoi(parts[1]));
    if (head == "maj" && parts.size() == 2) return maj_k(std::stoi(parts[1]));
    if (head == "xormaj" && parts.size() == 3)
      return xor_maj(std::stoi(parts[1]), std::stoi(parts[2]));
    if (head == "const0" && parts.size() == 2) return constant(std::stoi(parts[1]), 0);
    if (head == "const1" && parts.size() == 2) return constant(std::stoi(parts[1]), 1);
    if (head == "table" && parts.size() == 2) {
      const Bits t = parse_bits(parts[1]);
      int k = 0;
      while ((std::size_t{1} << k) < t.size()) ++k;
      return from_table(k, t);
    }
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception&) {
    // fall through to the common error below
  }
  throw std::invalid_argument("cannot parse predicate spec: " + spec);
}

Predicate Predicate::default_for_arity(int k) {
  if (k == 1) return xor_k(1);
  if (k == 5) return xor_maj(2, 3);
  return xor_maj(1, k - 1);
}

int eval_predicate(const Predicate& p, const Bits& bits) {
  return eval_predicate(p, std::span<const std::uint8_t>(bits));
}

int eval_predicate(const Predicate& p, std::span<const std::uint8_t> bits) {
  if (bits.size() != static_cast<std::size_t>(p.k))
    throw std::invalid_argument("eval_predicate: arity mismatch");
  return p.table[table_index(bits)];
}

Bits prg_output(const Predicate& p, const Hypergraph& g, const Bits& x) {
  if (x.size() != static_cast<std::size_t>(g.n))
    throw std::invalid_argument("prg_output: seed length != n");
  if (p.k != g.k) throw std::invalid_argument("prg_output: arity mismatch");
  Bits out(g.m());
  Bits restricted(p.k);
  for (int j = 0; j < g.m(); ++j) {
    const auto& e = g.edges[j].members;
    for (int i = 0; i < p.k; ++i) restricted[i] = x[e[i]];
    out[j] = p.table[table_index(restricted)];
  }
  return out;
}

int p_x_eval(const Predicate& p, const Bits& x, const Bits& z) {
  const int n = static_cast<int>(x.size());
  if (z.size() != static_cast<std::size_t>(p.k) * n)
    throw std::invalid_argument("p_x_eval: encoding length != kn");
  const auto s = decode_encoding(z, n, p.k);
  if (!s) throw std::domain_error("p_x_eval: input is not a hyperedge encoding");
  Bits restricted(p.k);
  for (int i = 0; i < p.k; ++i) restricted[i] = x[s->members[i]];
  return p.table[table_index(restricted)];
}

ChallengeSequence ChallengeSequence::without_secret() const {
  ChallengeSequence c = *this;
  c.secret.reset();
  return c;
}

ChallengeSequence sample_challenge(const Predicate& p, int n, int m,
                                   ChallengeKind kind, Rng& rng,
                                   bool retain_secret) {
  if (m < 1) throw std::invalid_argument("sample_challenge: need m >= 1");
  const std::uint64_t sub = rng.next_u64();
  ChallengeSequence ch;
  ch.kind = kind;
  {
    Rng graph_rng = derive_rng(sub, {tag(Stream::Graph)});
    ch.graph = sample_hypergraph(n, m, p.k, graph_rng);
  }
  if (kind == ChallengeKind::Pseudorandom) {
    Rng secret_rng = derive_rng(sub, {tag(Stream::Secret)});
    Bits x(n);
    for (auto& b : x) b = secret_rng.bernoulli(0.5) ? 1 : 0;
    ch.labels = prg_output(p, ch.graph, x);
    if (retain_secret) ch.secret = std::move(x);
  } else {
    Rng label_rng = derive_rng(sub, {tag(Stream::Labels)});
    ch.labels.resize(m);
    for (auto& b : ch.labels) b = label_rng.bernoulli(0.5) ? 1 : 0;
  }
  return ch;
}

nlohmann::json challenge_to_json(const ChallengeSequence& ch) {
  nlohmann::json j = hypergraph_to_json(ch.graph);
  j["kind"] = (ch.kind == ChallengeKind::Random) ? "random" : "pseudorandom";
  j["labels"] = format_bits(ch.labels);
  if (ch.secret) j["secret"] = format_bits(*ch.secret);
  return j;
}

ChallengeSequence challenge_from_json(const nlohmann::json& j) {
  ChallengeSequence ch;
  ch.graph = hypergraph_from_json(j);
  ch.kind = (j.at("kind").get<std::string>() == "random") ? ChallengeKind::Random
                                                          : ChallengeKind::Pseudorandom;
  ch.labels = parse_bits(j.at("labels").get<std::string>());
  if (ch.labels.size() != static_cast<std::size_t>(ch.graph.m()))
    throw std::invalid_argument("challenge_from_json: label count != m");
  if (j.contains("secret")) ch.secret = parse_bits(j.at("secret").get<std::string>());
  return ch;
}

}  // namespace hardnet
