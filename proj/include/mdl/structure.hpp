#pragma once

// structure function over finite-set families: for each integer budget k, the
// least log-size of a catalog set that holds the data at model cost <= k,
// plus the critical level where two-part coding first matches the one-part
// complexity estimate and its least-complexity witness.

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mdl/complexity.hpp"
#include "mdl/models.hpp"

namespace mdl {

struct StructureProfile {
  std::map<int, bits_t> points;            // k -> K_k, inf_bits where nothing fits
  std::map<int, Hypothesis> witnesses;     // achieving set per feasible level
  std::vector<std::pair<Hypothesis, bits_t>> catalog;  // containing sets with log-sizes
  bits_t khat_d = inf_bits;
  int kmax = 0;
  double c = 2.0;
  std::optional<int> k0;
  std::optional<Hypothesis> kmss;
};

// exact level map over the family's catalog. the one-part estimate comes from
// a fresh registry with the family installed as a two-part codec, so the
// level map and the budget line measure the same machinery; families without
// sequential coders fall back to the base lineup.
inline StructureProfile structure_function(const BitString& d, const std::shared_ptr<ModelClass>& family, int kmax) {
  StructureProfile prof;
  prof.kmax = kmax;

  ComplexityRegistry kreg;
  try {
    kreg.register_two_part(family);
  } catch (const std::invalid_argument&) {
  }
  prof.khat_d = kreg.khat(d).value;

  DataSample sample{d};
  for (auto& h : family->enumerate_for(sample, inf_bits)) {
    bits_t size = family->data_cost(h, sample);
    if (size == inf_bits) continue;
    prof.catalog.emplace_back(std::move(h), size);
  }

  for (int k = 0; k <= kmax; ++k) {
    bits_t best = inf_bits;
    const Hypothesis* witness = nullptr;
    for (const auto& [h, size] : prof.catalog) {
      if (std::ceil(h.model_cost) > static_cast<double>(k) + 1e-9) continue;
      // strict improvement keeps the catalog-order witness on exact ties
      if (size < best - 1e-9) {
        best = size;
        witness = &h;
      }
    }
    prof.points[k] = best;
    if (witness) prof.witnesses[k] = *witness;
  }
  return prof;
}

// critical level: least k where descending the level map has paid off, i.e.
// K_k + k stays within tolerance of the one-part estimate. the witness is the
// cheapest set achieving that level within the budget.
inline void find_kmss(StructureProfile& prof, double c = 2.0) {
  prof.c = c;
  prof.k0.reset();
  prof.kmss.reset();
  for (int k = 0; k <= prof.kmax; ++k) {
    bits_t level = prof.points.at(k);
    if (level == inf_bits || level + k > prof.khat_d + c + 1e-9) continue;
    prof.k0 = k;
    const Hypothesis* best = nullptr;
    for (const auto& [h, size] : prof.catalog) {
      if (std::ceil(h.model_cost) > static_cast<double>(k) + 1e-9) continue;
      if (size > level + 1e-9) continue;
      if (!best || h.model_cost < best->model_cost - 1e-9) best = &h;
    }
    prof.kmss = *best;
    return;
  }
}

inline std::string structure_csv(const StructureProfile& prof) {
  std::string out = "k,K_k,witness\n";
  for (int k = 0; k <= prof.kmax; ++k) {
    out += std::to_string(k) + "," + format_bits(prof.points.at(k)) + ",";
    auto it = prof.witnesses.find(k);
    if (it != prof.witnesses.end()) out += it->second.label;
    out += "\n";
  }
  return out;
}

// one character per level: '!' where nothing fits, then a ten-step ramp from
// '_' (zero) up to '@' (the profile's own maximum)
inline std::string structure_sparkline(const StructureProfile& prof) {
  static const char ramp[] = "_.:-=+*#%@";
  bits_t top = 0;
  for (const auto& [k, v] : prof.points)
    if (v != inf_bits) top = std::max(top, v);
  std::string out;
  for (int k = 0; k <= prof.kmax; ++k) {
    bits_t v = prof.points.at(k);
    if (v == inf_bits) {
      out += '!';
    } else {
      int idx = top > 0 ? static_cast<int>(std::lround(v / top * 9.0)) : 0;
      out += ramp[idx];
    }
  }
  return out;
}

}  // namespace mdl
