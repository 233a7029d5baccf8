#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hardnet/rng.hpp"

#include "json.hpp"

namespace hardnet {

// Bit vectors hold one bit per byte, entries in {0,1}. Serialized form is an
// ASCII '0'/'1' string.
using Bits = std::vector<std::uint8_t>;

// An ordered hyperedge: k distinct vertices, 0-based (the write-ups count
// from 1; storage here is 0-based everywhere).
struct Hyperedge {
  std::vector<int> members;
  int k() const { return static_cast<int>(members.size()); }
  bool operator==(const Hyperedge&) const = default;
};

struct Hypergraph {
  int n = 0;
  int k = 0;
  std::vector<Hyperedge> edges;
  int m() const { return static_cast<int>(edges.size()); }
  bool operator==(const Hypergraph&) const = default;
};

bool edge_valid(const Hyperedge& e, int n);

// Each edge an independent uniformly random ordered k-tuple of distinct
// vertices of [n].
Hypergraph sample_hypergraph(int n, int m, int k, Rng& rng);

// The kn-bit encoding: k size-n slices, slice j all-ones except a 0 at the
// j-th member of S.
Bits encode_hyperedge(const Hyperedge& s, int n);

// Inverse of encode_hyperedge; nullopt when z is not an encoding (a slice
// with no 0, a slice with more than one 0, or two slices marking the same
// vertex).
std::optional<Hyperedge> decode_encoding(const Bits& z, int n, int k);

// Coordinate-wise threshold map: bit i is 1 iff z[i] >= c (ties map to 1).
Bits psi_threshold_map(std::span<const double> z, double c);

std::string format_bits(const Bits& b);
// Human-readable encoding dump: slices separated by '|'.
std::string format_encoding(const Bits& z, int n);
Bits parse_bits(const std::string& s);

nlohmann::json hypergraph_to_json(const Hypergraph& g);
Hypergraph hypergraph_from_json(const nlohmann::json& j);

}  // namespace hardnet
