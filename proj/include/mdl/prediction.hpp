#pragma once

// sequence extrapolation two ways: a weighted mixture over sequential
// predictors (posterior-tracked in the log domain) and the two-part-total
// minimizer, plus the error-sum, ratio-convergence, and rule-agreement
// experiments that compare them.

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mdl/arith.hpp"
#include "mdl/models.hpp"

namespace mdl {

struct UndefinedConditional : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MixtureComponent {
  Hypothesis hyp;
  std::shared_ptr<BitPredictor> prototype;
  double weight = 0;
};

class MixtureStream;

class MixturePredictor {
 public:
  enum class Weighting { kAsGiven, kNormalized };

  explicit MixturePredictor(std::vector<MixtureComponent> comps, Weighting mode = Weighting::kNormalized)
      : comps_(std::move(comps)) {
    if (comps_.empty()) throw std::invalid_argument("MixturePredictor: no components");
    double sum = 0;
    for (const auto& c : comps_) {
      if (!c.prototype) throw std::invalid_argument("MixturePredictor: component without a predictor");
      if (!(c.weight > 0)) throw std::invalid_argument("MixturePredictor: weights must be positive");
      sum += c.weight;
    }
    if (mode == Weighting::kNormalized) {
      for (auto& c : comps_) c.weight /= sum;
      outside_ = 0;
    } else {
      if (sum > 1.0 + 1e-9) throw std::invalid_argument("MixturePredictor: weights exceed unit mass");
      outside_ = std::max(0.0, 1.0 - sum);
    }
  }

  // one component per hypothesis, weighted 2^{-model_cost}
  static MixturePredictor from_class(const ModelClass& cls, Weighting mode = Weighting::kNormalized) {
    std::vector<MixtureComponent> comps;
    for (auto& h : cls.enumerate(inf_bits)) {
      auto pred = cls.predictor(h);
      if (!pred) continue;
      double w = std::exp2(-h.model_cost);
      comps.push_back({std::move(h), std::shared_ptr<BitPredictor>(std::move(pred)), w});
    }
    if (comps.empty()) throw std::invalid_argument("MixturePredictor: class has no sequential predictors");
    return MixturePredictor(std::move(comps), mode);
  }

  const std::vector<MixtureComponent>& components() const { return comps_; }
  double mass_outside() const { return outside_; }

  MixtureStream stream() const;
  double log2_mass(const BitString& x) const;
  double conditional(const BitString& x, const BitString& y) const;

 private:
  std::vector<MixtureComponent> comps_;
  double outside_ = 0;
};

// incremental view of the mixture: per-component live predictor plus running
// log mass, so long prefixes cost one predictor step per bit
class MixtureStream {
 public:
  explicit MixtureStream(const MixturePredictor& src) {
    for (const auto& c : src.components()) slots_.push_back({c.prototype->clone(), std::log2(c.weight)});
  }

  bool alive() const {
    for (const auto& s : slots_)
      if (std::isfinite(s.log2_wp)) return true;
    return false;
  }

  // posterior-weighted average of the component conditionals
  double prob_one() const {
    double top = peak();
    if (!std::isfinite(top)) throw UndefinedConditional("mixture: conditioning on a zero-mass prefix");
    double num = 0, den = 0;
    for (const auto& s : slots_) {
      if (!std::isfinite(s.log2_wp)) continue;
      double share = std::exp2(s.log2_wp - top);
      num += share * s.pred->prob_one();
      den += share;
    }
    return num / den;
  }

  void update(int bit) {
    for (auto& s : slots_) {
      if (std::isfinite(s.log2_wp)) {
        double p = s.pred->prob_one();
        double step = bit ? p : 1.0 - p;
        s.log2_wp = step > 0 ? s.log2_wp + std::log2(step) : -inf_bits;
      }
      s.pred->update(bit);
    }
  }

  double log2_mass() const {
    double top = peak();
    if (!std::isfinite(top)) return -inf_bits;
    double acc = 0;
    for (const auto& s : slots_)
      if (std::isfinite(s.log2_wp)) acc += std::exp2(s.log2_wp - top);
    return top + std::log2(acc);
  }

 private:
  struct Slot {
    std::unique_ptr<BitPredictor> pred;
    double log2_wp;  // log2 of weight times the component's prefix probability
  };

  double peak() const {
    double top = -inf_bits;
    for (const auto& s : slots_) top = std::max(top, s.log2_wp);
    return top;
  }

  std::vector<Slot> slots_;
};

inline MixtureStream MixturePredictor::stream() const { return MixtureStream(*this); }

inline double MixturePredictor::log2_mass(const BitString& x) const {
  MixtureStream s = stream();
  for (std::size_t i = 0; i < x.size(); ++i) s.update(x[i]);
  return s.log2_mass();
}

// stepwise product of conditionals; equals mass(xy)/mass(x) by the chain rule
inline double MixturePredictor::conditional(const BitString& x, const BitString& y) const {
  MixtureStream s = stream();
  for (std::size_t i = 0; i < x.size(); ++i) s.update(x[i]);
  if (!s.alive()) throw UndefinedConditional("mixture: conditioning on a zero-mass prefix");
  double acc = 1.0;
  for (std::size_t i = 0; i < y.size() && acc > 0; ++i) {
    double p1 = s.prob_one();
    acc *= y[i] ? p1 : 1.0 - p1;
    s.update(y[i]);
  }
  return acc;
}

inline double mixture_conditional(const MixturePredictor& pred, const BitString& x, const BitString& y) {
  return pred.conditional(x, y);
}

// ---- two-part prediction ----

namespace detail {

inline bits_t best_total(const ClassRegistry& classes, const BitString& x) {
  bits_t best = inf_bits;
  DataSample d{x};
  for (auto& [cls, hyp] : classes.enumerate_for(d, inf_bits)) {
    bits_t data = cls->data_cost(hyp, d);
    if (data != inf_bits) best = std::min(best, hyp.model_cost + data);
  }
  return best;
}

}  // namespace detail

// argmin over extrapolations of the growth in the best two-part total;
// first-in-lexicographic-order wins ties
inline BitString predict_mdl(const ClassRegistry& classes, const BitString& x, unsigned h) {
  if (h < 1 || h > 16) throw std::invalid_argument("predict_mdl: need 1 <= horizon <= 16");
  BitString best_y;
  bits_t best = inf_bits;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << h); ++v) {
    BitString y = BitString::from_index(v, h);
    bits_t total = detail::best_total(classes, x + y);
    if (total < best - 1e-9) {
      best = total;
      best_y = y;
    }
  }
  return best_y;
}

// argmax of the mixture conditional, lexicographic on ties
inline BitString predict_mixture(const MixturePredictor& pred, const BitString& x, unsigned h) {
  if (h < 1 || h > 16) throw std::invalid_argument("predict_mixture: need 1 <= horizon <= 16");
  BitString best_y;
  double best = -1;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << h); ++v) {
    BitString y = BitString::from_index(v, h);
    double p = pred.conditional(x, y);
    if (p > best + 1e-12) {
      best = p;
      best_y = y;
    }
  }
  return best_y;
}

struct PredictionRecord {
  BitString prefix;
  BitString candidate;
  double mixture_conditional = 0;
  bits_t two_part_delta = 0;
  bool chosen_by_mixture = false;
  bool chosen_by_two_part = false;
};

inline std::vector<PredictionRecord> prediction_records(const ClassRegistry& classes, const MixturePredictor& pred,
                                                        const BitString& x, unsigned h) {
  if (h < 1 || h > 12) throw std::invalid_argument("prediction_records: need 1 <= horizon <= 12");
  bits_t base = detail::best_total(classes, x);
  std::vector<PredictionRecord> out;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << h); ++v) {
    PredictionRecord rec;
    rec.prefix = x;
    rec.candidate = BitString::from_index(v, h);
    rec.mixture_conditional = pred.conditional(x, rec.candidate);
    bits_t total = detail::best_total(classes, x + rec.candidate);
    rec.two_part_delta = total == inf_bits ? inf_bits : total - base;
    out.push_back(std::move(rec));
  }
  BitString ym = predict_mixture(pred, x, h), yc = predict_mdl(classes, x, h);
  for (auto& rec : out) {
    rec.chosen_by_mixture = rec.candidate == ym;
    rec.chosen_by_two_part = rec.candidate == yc;
  }
  return out;
}

// ---- experiments; per-trial streams derive from seed + trial index ----

namespace detail {

inline BitString sample_from(BitPredictor& source, std::size_t n, std::mt19937_64& rng) {
  BitString x;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    int bit = unit(rng) < source.prob_one() ? 1 : 0;
    source.update(bit);
    x.push_back(bit);
  }
  return x;
}

}  // namespace detail

struct SnReport {
  std::vector<double> per_step;    // mean squared one-step error at each n
  std::vector<double> cumulative;
  double total = 0;                // final cumulative error sum
  double bound = 0;                // (-ln weight of the true component) / 2
  double sigma = 0;                // standard error of the total across trials
};

// squared difference between the mixture's next-bit probability and the true
// component's, averaged over sampled histories
inline SnReport sn_experiment(const MixturePredictor& pred, std::size_t mu_index, std::size_t n_max,
                              std::size_t trials, std::uint64_t seed) {
  const auto& comps = pred.components();
  if (mu_index >= comps.size()) throw std::invalid_argument("sn_experiment: no such component");
  SnReport rep;
  rep.bound = -std::log(comps[mu_index].weight) / 2.0;
  rep.per_step.assign(n_max, 0.0);

  std::vector<double> trial_totals(trials, 0.0);
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(seed + t);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto mu = comps[mu_index].prototype->clone();
    MixtureStream mix = pred.stream();
    for (std::size_t n = 0; n < n_max; ++n) {
      double p_true = mu->prob_one();
      double diff = mix.prob_one() - p_true;
      rep.per_step[n] += diff * diff;
      trial_totals[t] += diff * diff;
      int bit = unit(rng) < p_true ? 1 : 0;
      mu->update(bit);
      mix.update(bit);
    }
  }

  double mean = 0;
  for (double v : trial_totals) mean += v;
  mean /= static_cast<double>(trials);
  double var = 0;
  for (double v : trial_totals) var += (v - mean) * (v - mean);
  if (trials > 1) var /= static_cast<double>(trials - 1);
  rep.sigma = std::sqrt(var / static_cast<double>(trials));

  double acc = 0;
  for (auto& v : rep.per_step) {
    v /= static_cast<double>(trials);
    acc += v;
    rep.cumulative.push_back(acc);
  }
  rep.total = acc;
  return rep;
}

struct ConvergenceReport {
  std::vector<std::size_t> checkpoints;
  std::vector<double> median_abs_dev;  // median |ratio - 1| per checkpoint
};

// next-bit probability ratio mixture/truth along sampled histories, medians
// collected at powers of two from 16 up to n_max
inline ConvergenceReport convergence_experiment(const MixturePredictor& pred, std::size_t mu_index,
                                                std::size_t n_max, std::size_t trials, std::uint64_t seed) {
  const auto& comps = pred.components();
  if (mu_index >= comps.size()) throw std::invalid_argument("convergence_experiment: no such component");
  ConvergenceReport rep;
  for (std::size_t n = 16; n <= n_max; n *= 2) rep.checkpoints.push_back(n);
  std::vector<std::vector<double>> devs(rep.checkpoints.size());

  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(seed + t);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto mu = comps[mu_index].prototype->clone();
    MixtureStream mix = pred.stream();
    std::size_t next = 0;
    for (std::size_t n = 1; n <= n_max && next < rep.checkpoints.size(); ++n) {
      double p_true = mu->prob_one();
      int bit = unit(rng) < p_true ? 1 : 0;
      mu->update(bit);
      mix.update(bit);
      if (n == rep.checkpoints[next]) {
        // ratio for candidate "1" at this prefix length; on the "0" side when
        // the truth forbids a one outright
        double p1_true = mu->prob_one();
        double p1_mix = mix.prob_one();
        double ratio = p1_true > 0 ? p1_mix / p1_true : (1.0 - p1_mix) / (1.0 - p1_true);
        devs[next].push_back(std::abs(ratio - 1.0));
        ++next;
      }
    }
  }

  for (auto& d : devs) {
    std::sort(d.begin(), d.end());
    rep.median_abs_dev.push_back(d.empty() ? 0.0 : d[d.size() / 2]);
  }
  return rep;
}

struct AgreementReport {
  double rate = 0;
  std::size_t disagreements = 0;
};

// fraction of sampled prefixes where the two rules extrapolate identically
inline AgreementReport agreement_experiment(const ClassRegistry& classes, const MixturePredictor& pred,
                                            const BitPredictor& mu, std::size_t n, unsigned h, std::size_t trials,
                                            std::uint64_t seed) {
  AgreementReport rep;
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(seed + t);
    auto source = mu.clone();
    BitString x = detail::sample_from(*source, n, rng);
    if (predict_mdl(classes, x, h) == predict_mixture(pred, x, h))
      rep.rate += 1.0;
    else
      ++rep.disagreements;
  }
  rep.rate /= static_cast<double>(trials);
  return rep;
}

// forced bits at even indices from a repeating pattern, a fair coin at odd
// ones: the digits-of-a-known-constant analog for convergence runs
class EvenPatternPredictor final : public BitPredictor {
 public:
  explicit EvenPatternPredictor(BitString pattern) : pattern_(std::move(pattern)) {
    if (pattern_.empty()) throw std::invalid_argument("EvenPatternPredictor: empty pattern");
  }
  double prob_one() const override {
    if (pos_ % 2 != 0) return 0.5;
    return pattern_[(pos_ / 2) % pattern_.size()] ? 1.0 : 0.0;
  }
  void update(int) override { ++pos_; }
  std::unique_ptr<BitPredictor> clone() const override { return std::make_unique<EvenPatternPredictor>(*this); }

 private:
  BitString pattern_;
  std::size_t pos_ = 0;
};

}  // namespace mdl
