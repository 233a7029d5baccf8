#pragma once

#include "hardnet/predicate.hpp"

namespace hardnet {

// Monotone DNF over {0,1}^width: each term is a sorted set of positions, the
// conjunction of those positive literals. An empty term is true; an empty
// formula is false.
struct DnfFormula {
  int width = 0;
  std::vector<std::vector<int>> terms;
};

// The formula with one term per satisfying assignment b of P; term indices
// are the flat positions (j,l) with x_l != b_j. Agrees with P_x on every
// hyperedge encoding. Duplicate terms are dropped.
DnfFormula compile_predicate_dnf(const Predicate& p, const Bits& x, int n);

int eval_dnf(const DnfFormula& f, const Bits& z);

// Serialized form is the bare array of index arrays; the width is context.
nlohmann::json dnf_to_json(const DnfFormula& f);
DnfFormula dnf_from_json(const nlohmann::json& j, int width);

}  // namespace hardnet
