#include "hardnet/encoding.hpp"

#include <numeric>
#include <stdexcept>

namespace hardnet {

bool edge_valid(const Hyperedge& e, int n) {
  std::vector<bool> seen(n, false);
  for (int v : e.members) {
    if (v < 0 || v >= n || seen[v]) return false;
    seen[v] = true;
  }
  return !e.members.empty();
}

Hypergraph sample_hypergraph(int n, int m, int k, Rng& rng) {
  if (k < 1 || k > n) throw std::invalid_argument("sample_hypergraph: need 1 <= k <= n");
  if (m < 1) throw std::invalid_argument("sample_hypergraph: need m >= 1");
  Hypergraph g;
  g.n = n;
  g.k = k;
  g.edges.resize(m);
  std::vector<int> pool(n);
  for (auto& edge : g.edges) {
    // Partial Fisher-Yates: the first k entries become the ordered edge.
    std::iota(pool.begin(), pool.end(), 0);
    edge.members.resize(k);
    for (int j = 0; j < k; ++j) {
      const auto r = j + static_cast<int>(rng.uniform_int(n - j));
      std::swap(pool[j], pool[r]);
      edge.members[j] = pool[j];
    }
  }
  return g;
}

Bits encode_hyperedge(const Hyperedge& s, int n) {
  if (!edge_valid(s, n)) throw std::invalid_argument("encode_hyperedge: invalid edge");
  const int k = s.k();
  Bits z(static_cast<std::size_t>(k) * n, 1);
  for (int j = 0; j < k; ++j) z[static_cast<std::size_t>(j) * n + s.members[j]] = 0;
  return z;
}

std::optional<Hyperedge> decode_encoding(const Bits& z, int n, int k) {
  if (n < 1 || k < 1 || z.size() != static_cast<std::size_t>(k) * n)
    throw std::invalid_argument("decode_encoding: length mismatch");
  Hyperedge s;
  s.members.resize(k, -1);
  for (int j = 0; j < k; ++j) {
    int zero_at = -1;
    for (int l = 0; l < n; ++l) {
      if (z[static_cast<std::size_t>(j) * n + l] == 0) {
        if (zero_at >= 0) return std::nullopt;  // slice has two zeros
        zero_at = l;
      }
    }
    if (zero_at < 0) return std::nullopt;  // slice has no zero
    s.members[j] = zero_at;
  }
  std::vector<bool> seen(n, false);
  for (int v : s.members) {
    if (seen[v]) return std::nullopt;  // two slices mark the same vertex
    seen[v] = true;
  }
  return s;
}

Bits psi_threshold_map(std::span<const double> z, double c) {
  Bits out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = (z[i] >= c) ? 1 : 0;
  return out;
}

std::string format_bits(const Bits& b) {
  std::string s;
  s.reserve(b.size());
  for (auto v : b) s.push_back(v ? '1' : '0');
  return s;
}

std::string format_encoding(const Bits& z, int n) {
  std::string s;
  s.reserve(z.size() + z.size() / n);
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (i > 0 && i % n == 0) s.push_back('|');
    s.push_back(z[i] ? '1' : '0');
  }
  return s;
}

Bits parse_bits(const std::string& s) {
  Bits b;
  b.reserve(s.size());
  for (char ch : s) {
    if (ch == '|') continue;
    if (ch != '0' && ch != '1') throw std::invalid_argument("parse_bits: bad character");
    b.push_back(ch == '1' ? 1 : 0);
  }
  return b;
}

nlohmann::json hypergraph_to_json(const Hypergraph& g) {
  nlohmann::json j;
  j["n"] = g.n;
  j["k"] = g.k;
  j["m"] = g.m();
  auto edges = nlohmann::json::array();
  for (const auto& e : g.edges) edges.push_back(e.members);
  j["edges"] = std::move(edges);
  return j;
}

Hypergraph hypergraph_from_json(const nlohmann::json& j) {
  Hypergraph g;
  g.n = j.at("n").get<int>();
  g.k = j.at("k").get<int>();
  for (const auto& e : j.at("edges")) {
    Hyperedge h;
    h.members = e.get<std::vector<int>>();
    if (!edge_valid(h, g.n) || h.k() != g.k)
      throw std::invalid_argument("hypergraph_from_json: invalid edge");
    g.edges.push_back(std::move(h));
  }
  return g;
}

}  // namespace hardnet
