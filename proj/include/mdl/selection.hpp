#pragma once

// hypothesis selection over joint class enumerations: two-part minimization,
// maximum a posteriori under an explicit prior, the generalized
// minimal-sufficient-statistic rule, and exception-based selection. all rules
// share one deterministic tie-break engine and emit a full audit table.

#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mdl/complexity.hpp"
#include "mdl/models.hpp"

namespace mdl {

struct NoFeasibleHypothesis : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoSufficientStatistic : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HypothesisRow {
  const ModelClass* cls = nullptr;
  Hypothesis hyp;
  bits_t model_cost = 0;
  bits_t data_cost = inf_bits;   // exception-list cost under the exception rule
  bits_t total = inf_bits;
  double posterior = 0;          // normalized under the run's prior
  bits_t margin = 0;             // sufficiency margin, filled by the gkmss rule
};

// prior over an enumerated hypothesis set. the universal proxy takes
// w(H) = 2^{-model_cost} unnormalized: model costs are realized prefix-code
// lengths, so the weights already sum below one.
struct PriorSpec {
  enum Kind { kUniversalProxy, kUniform, kExplicit };

  Kind kind = kUniversalProxy;
  bits_t description_cost = 2.0;  // declared stand-in for the prior's own complexity
  std::vector<double> weights;    // explicit table, aligned with the enumeration

  static PriorSpec universal_proxy() { return {}; }

  static PriorSpec uniform() {
    PriorSpec p;
    p.kind = kUniform;
    return p;
  }

  static PriorSpec explicit_table(std::vector<double> w, bits_t desc_cost) {
    PriorSpec p;
    p.kind = kExplicit;
    p.weights = std::move(w);
    p.description_cost = desc_cost;
    for (double v : p.weights)
      if (!(v >= 0)) throw std::invalid_argument("PriorSpec: negative weight");
    return p;
  }

  bits_t neg_log_weight(const std::vector<HypothesisRow>& rows, std::size_t i) const {
    switch (kind) {
      case kUniversalProxy: return rows[i].model_cost;
      case kUniform: return std::log2(static_cast<double>(rows.size()));
      case kExplicit: {
        if (weights.size() != rows.size())
          throw std::invalid_argument("PriorSpec: table size does not match the enumeration");
        double sum = 0;
        for (double v : weights) sum += v;
        if (sum <= 0) throw std::invalid_argument("PriorSpec: all weights zero");
        return weights[i] > 0 ? -std::log2(weights[i] / sum) : inf_bits;
      }
    }
    return inf_bits;
  }
};

struct SelectionReport {
  std::string rule;
  std::size_t winner_index = 0;
  std::vector<HypothesisRow> table;
  std::vector<std::string> tie_trace;   // tie-break stages actually applied
  bits_t khat_d = inf_bits;             // complexity budget, filled by gkmss
  bits_t alpha_hat = 0;                 // declared description-cost slack (map)
  double posterior_ratio = 1.0;         // posterior(mdl winner)/posterior(map winner)
  bool posterior_ratio_ok = true;       // ratio >= 2^{-alpha_hat}
  bool emdl_diverges = false;           // exception winner differs from plain mdl

  const HypothesisRow& winner() const { return table.at(winner_index); }
};

namespace detail {

inline std::vector<HypothesisRow> build_rows(const ClassRegistry& classes, const DataSample& d, bits_t budget) {
  std::vector<HypothesisRow> rows;
  for (auto& [cls, hyp] : classes.enumerate_for(d, budget)) {
    HypothesisRow row;
    row.cls = cls;
    row.model_cost = hyp.model_cost;
    row.data_cost = cls->data_cost(hyp, d);
    row.total = row.data_cost == inf_bits ? inf_bits : row.model_cost + row.data_cost;
    row.hyp = std::move(hyp);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline auto plumbing_key(const HypothesisRow& r) {
  return std::make_tuple(r.cls->registry_position(), r.hyp.class_id, r.hyp.index);
}

// argmin of `primary` over `eligible`, ties within 1e-9 resolved by
// `secondary`, then by the declaration-order key; stages used are recorded
inline std::size_t pick(const std::vector<HypothesisRow>& rows, const std::vector<std::size_t>& eligible,
                        const std::vector<bits_t>& primary, const std::vector<bits_t>& secondary,
                        const char* secondary_name, std::vector<std::string>& trace) {
  bits_t best = inf_bits;
  for (std::size_t i : eligible) best = std::min(best, primary[i]);
  std::vector<std::size_t> cands;
  for (std::size_t i : eligible)
    if (primary[i] <= best + 1e-9) cands.push_back(i);

  if (cands.size() > 1) {
    trace.push_back("objective tie among " + std::to_string(cands.size()) + ": preferring least " + secondary_name);
    bits_t s = inf_bits;
    for (std::size_t i : cands) s = std::min(s, secondary[i]);
    std::vector<std::size_t> keep;
    for (std::size_t i : cands)
      if (secondary[i] <= s + 1e-9) keep.push_back(i);
    cands = std::move(keep);
  }
  if (cands.size() > 1) {
    trace.push_back("still tied among " + std::to_string(cands.size()) + ": declaration order decides");
    std::size_t arg = cands[0];
    for (std::size_t i : cands)
      if (plumbing_key(rows[i]) < plumbing_key(rows[arg])) arg = i;
    return arg;
  }
  return cands.front();
}

// posterior column: 2^{-(prior + data)} normalized in the log domain
inline void fill_posteriors(std::vector<HypothesisRow>& rows, const PriorSpec& prior) {
  std::vector<bits_t> score(rows.size(), inf_bits);
  bits_t lo = inf_bits;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    bits_t w = prior.neg_log_weight(rows, i);
    if (w == inf_bits || rows[i].data_cost == inf_bits) continue;
    score[i] = w + rows[i].data_cost;
    lo = std::min(lo, score[i]);
  }
  if (lo == inf_bits) return;
  double z = 0;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (score[i] != inf_bits) z += std::exp2(lo - score[i]);
  for (std::size_t i = 0; i < rows.size(); ++i)
    rows[i].posterior = score[i] == inf_bits ? 0.0 : std::exp2(lo - score[i]) / z;
}

inline std::vector<std::size_t> finite_totals(const std::vector<HypothesisRow>& rows) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (rows[i].total != inf_bits) out.push_back(i);
  return out;
}

}  // namespace detail

// two-part minimum: least model_cost + data_cost, ties by least model cost
inline SelectionReport select_mdl(const ClassRegistry& classes, const DataSample& d, bits_t budget = inf_bits) {
  SelectionReport rep;
  rep.rule = "mdl";
  rep.table = detail::build_rows(classes, d, budget);
  auto eligible = detail::finite_totals(rep.table);
  if (eligible.empty()) throw NoFeasibleHypothesis("select_mdl: every enumerated hypothesis assigns the data probability zero");
  std::vector<bits_t> primary(rep.table.size()), model(rep.table.size());
  for (std::size_t i = 0; i < rep.table.size(); ++i) {
    primary[i] = rep.table[i].total;
    model[i] = rep.table[i].model_cost;
  }
  rep.winner_index = detail::pick(rep.table, eligible, primary, model, "model cost", rep.tie_trace);
  detail::fill_posteriors(rep.table, PriorSpec::universal_proxy());
  return rep;
}

// maximum a posteriori: least -log w(H) + data_cost; among maximizers the
// least-complexity hypothesis wins
inline SelectionReport select_map(const ClassRegistry& classes, const DataSample& d, const PriorSpec& prior,
                                  bits_t budget = inf_bits) {
  SelectionReport rep;
  rep.rule = "map";
  rep.table = detail::build_rows(classes, d, budget);
  std::vector<bits_t> primary(rep.table.size(), inf_bits), model(rep.table.size());
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < rep.table.size(); ++i) {
    model[i] = rep.table[i].model_cost;
    bits_t w = prior.neg_log_weight(rep.table, i);
    if (w == inf_bits || rep.table[i].data_cost == inf_bits) continue;
    primary[i] = w + rep.table[i].data_cost;
    eligible.push_back(i);
  }
  if (eligible.empty()) throw NoFeasibleHypothesis("select_map: no hypothesis has positive posterior");
  rep.winner_index = detail::pick(rep.table, eligible, primary, model, "model cost", rep.tie_trace);
  detail::fill_posteriors(rep.table, prior);

  // audit: the two-part winner's posterior may trail the map winner's by at
  // most the declared description-cost slack
  rep.alpha_hat = prior.description_cost + rep.winner().cls->conditional_coder_cost();
  std::vector<bits_t> totals(rep.table.size());
  for (std::size_t i = 0; i < rep.table.size(); ++i) totals[i] = rep.table[i].total;
  auto mdl_eligible = detail::finite_totals(rep.table);
  if (!mdl_eligible.empty()) {
    std::vector<std::string> scratch;
    std::size_t mdl_idx = detail::pick(rep.table, mdl_eligible, totals, model, "model cost", scratch);
    double p_map = rep.winner().posterior;
    if (p_map > 0) {
      rep.posterior_ratio = rep.table[mdl_idx].posterior / p_map;
      rep.posterior_ratio_ok = rep.posterior_ratio >= std::exp2(-rep.alpha_hat) - 1e-12;
    }
  }
  return rep;
}

// generalized minimal sufficient statistic: among hypotheses whose two-part
// total stays within tolerance of the one-part complexity estimate, take the
// least-complexity one
inline SelectionReport select_gkmss(const ClassRegistry& classes, const DataSample& d, const ComplexityRegistry& kreg,
                                    double tolerance = 2.0, bits_t budget = inf_bits) {
  SelectionReport rep;
  rep.rule = "gkmss";
  rep.khat_d = kreg.khat(d.bits()).value;
  rep.table = detail::build_rows(classes, d, budget);
  std::vector<std::size_t> feasible;
  std::vector<bits_t> model(rep.table.size()), total(rep.table.size());
  for (std::size_t i = 0; i < rep.table.size(); ++i) {
    model[i] = rep.table[i].model_cost;
    total[i] = rep.table[i].total;
    rep.table[i].margin = rep.table[i].total == inf_bits ? -inf_bits : rep.khat_d + tolerance - rep.table[i].total;
    if (rep.table[i].total <= rep.khat_d + tolerance + 1e-9) feasible.push_back(i);
  }
  if (feasible.empty())
    throw NoSufficientStatistic("select_gkmss: no sufficient statistic within tolerance " + format_bits(tolerance) +
                                " of khat = " + format_bits(rep.khat_d));
  rep.winner_index = detail::pick(rep.table, feasible, model, total, "total", rep.tie_trace);
  detail::fill_posteriors(rep.table, PriorSpec::universal_proxy());
  return rep;
}

// exception-based selection: model cost plus a literal listing of the
// misclassified part of the sample, ignoring how precisely the model pins
// down the rest. kept for its divergence from the two-part rule.
inline SelectionReport select_emdl(const ClassRegistry& classes, const DataSample& d, bits_t budget = inf_bits) {
  SelectionReport rep;
  rep.rule = "emdl";
  auto enumerated = classes.enumerate_for(d, budget);
  bits_t unit = d.is_bits() ? static_cast<bits_t>(d.bits().size())
                            : static_cast<bits_t>(2 * d.pairs().precision_bits);
  for (auto& [cls, hyp] : enumerated) {
    auto marks = cls->classification(hyp, d);
    if (marks.empty()) continue;  // class does not classify this sample
    std::size_t missed = 0;
    for (bool ok : marks)
      if (!ok) ++missed;
    HypothesisRow row;
    row.cls = cls;
    row.model_cost = hyp.model_cost;
    row.data_cost = unit * static_cast<bits_t>(missed);
    row.total = row.model_cost + row.data_cost;
    row.hyp = std::move(hyp);
    rep.table.push_back(std::move(row));
  }
  if (rep.table.empty()) throw NoFeasibleHypothesis("select_emdl: no class classifies this sample");
  std::vector<std::size_t> eligible(rep.table.size());
  for (std::size_t i = 0; i < rep.table.size(); ++i) eligible[i] = i;
  std::vector<bits_t> primary(rep.table.size()), model(rep.table.size());
  for (std::size_t i = 0; i < rep.table.size(); ++i) {
    primary[i] = rep.table[i].total;
    model[i] = rep.table[i].model_cost;
  }
  rep.winner_index = detail::pick(rep.table, eligible, primary, model, "model cost", rep.tie_trace);
  detail::fill_posteriors(rep.table, PriorSpec::universal_proxy());

  try {
    auto plain = select_mdl(classes, d, budget);
    rep.emdl_diverges = plain.winner().hyp.class_id != rep.winner().hyp.class_id ||
                        plain.winner().hyp.index != rep.winner().hyp.index;
  } catch (const NoFeasibleHypothesis&) {
    rep.emdl_diverges = false;
  }
  return rep;
}

// admissibility screen: keep hypotheses for which the data looks typical and
// which the prior does not find surprising
struct AdmissibilityRow {
  const ModelClass* cls = nullptr;
  Hypothesis hyp;
  bits_t data_deficiency = 0;   // data_cost - conditional complexity estimate
  bits_t prior_deficiency = 0;  // -log2 P(H) - model_cost
  bool admissible = true;
};

inline std::vector<AdmissibilityRow> admissible_filter(const ClassRegistry& classes, const DataSample& d,
                                                       const PriorSpec& prior, const ComplexityRegistry& kreg,
                                                       bits_t t_data = -1, bits_t t_prior = -1) {
  const BitString& x = d.bits();
  bits_t fallback = 2.0 * std::log2(std::max<double>(2.0, static_cast<double>(x.size()))) + 8.0;
  if (t_data < 0) t_data = fallback;
  if (t_prior < 0) t_prior = fallback;

  auto rows = detail::build_rows(classes, d, inf_bits);
  std::vector<AdmissibilityRow> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    AdmissibilityRow a;
    a.cls = rows[i].cls;
    a.data_deficiency = rows[i].data_cost == inf_bits
                            ? inf_bits
                            : rows[i].data_cost - kreg.khat_conditional(*rows[i].cls, rows[i].hyp, x).value;
    bits_t w = prior.neg_log_weight(rows, i);
    a.prior_deficiency = w == inf_bits ? inf_bits : w - rows[i].model_cost;
    a.admissible = a.data_deficiency <= t_data && a.prior_deficiency <= t_prior;
    a.hyp = std::move(rows[i].hyp);
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace mdl
