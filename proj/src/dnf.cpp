#include "hardnet/dnf.hpp"

#include <algorithm>
#include <stdexcept>

namespace hardnet {

DnfFormula compile_predicate_dnf(const Predicate& p, const Bits& x, int n) {
  if (x.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("compile_predicate_dnf: x length != n");
  DnfFormula f;
  f.width = p.k * n;
  for (std::size_t assignment = 0; assignment < p.table.size(); ++assignment) {
    if (!p.table[assignment]) continue;
    std::vector<int> term;
    for (int j = 0; j < p.k; ++j) {
      // Big-endian: bit j of the assignment index.
      const int b_j = (assignment >> (p.k - 1 - j)) & 1;
      for (int l = 0; l < n; ++l) {
        if (x[l] != b_j) term.push_back(j * n + l);
      }
    }
    f.terms.push_back(std::move(term));  // positions already sorted
  }
  std::sort(f.terms.begin(), f.terms.end());
  f.terms.erase(std::unique(f.terms.begin(), f.terms.end()), f.terms.end());
  return f;
}

int eval_dnf(const DnfFormula& f, const Bits& z) {
  if (z.size() != static_cast<std::size_t>(f.width))
    throw std::invalid_argument("eval_dnf: input length != width");
  for (const auto& term : f.terms) {
    bool sat = true;
    for (int idx : term) {
      if (idx < 0 || idx >= f.width)
        throw std::invalid_argument("eval_dnf: term index out of range");
      if (!z[idx]) {
        sat = false;
        break;
      }
    }
    if (sat) return 1;
  }
  return 0;
}

nlohmann::json dnf_to_json(const DnfFormula& f) {
  return nlohmann::json(f.terms);
}

DnfFormula dnf_from_json(const nlohmann::json& j, int width) {
  DnfFormula f;
  f.width = width;
  f.terms = j.get<std::vector<std::vector<int>>>();
  return f;
}

}  // namespace hardnet
