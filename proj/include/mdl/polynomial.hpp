#pragma once

// polynomial hypotheses over supervised (x, y) samples. a degree-(k-1)
// hypothesis spends k*d bits on coefficients and 2d bits per exception point
// it fails to fit at precision d. the data cost charges the exceptions; the
// best achievable exception count for each degree is found by interpolating
// every k-subset of the sample, which is exhaustive for the small n used here.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdl/models.hpp"

namespace mdl {

enum class PolyCostMode {
  paper_example,  // model_cost = k*d exactly, coefficients and nothing else
  full_header,    // adds self-delimiting headers for k and d plus the class id
};

class PolynomialClass final : public ModelClass {
 public:
  PolynomialClass(unsigned max_degree, unsigned d, PolyCostMode mode)
      : max_degree_(max_degree), d_(d), mode_(mode),
        id_("polynomial:max_degree=" + std::to_string(max_degree) + ",d=" + std::to_string(d) +
            (mode == PolyCostMode::paper_example ? ",mode=paper" : ",mode=header")) {
    if (d < 1) throw std::invalid_argument("polynomial_class: need d >= 1");
    if (max_degree > 30) throw std::invalid_argument("polynomial_class: max_degree too large");
  }

  const std::string& id() const override { return id_; }
  std::size_t registry_position() const override { return kRegistryPolynomial; }
  unsigned precision() const { return d_; }

  std::vector<Hypothesis> enumerate(bits_t budget) const override {
    std::vector<Hypothesis> out;
    for (unsigned k = 1; k <= max_degree_ + 1; ++k) {
      bits_t cost = model_cost(k);
      if (cost > budget + 1e-9) continue;
      out.push_back({id_, k - 1, cost, "degree=" + std::to_string(k - 1),
                     {static_cast<double>(k)}});
    }
    return out;
  }

  bits_t model_cost(unsigned k) const {
    bits_t coeff = static_cast<bits_t>(k) * d_;
    if (mode_ == PolyCostMode::paper_example) return coeff;
    return coeff + static_cast<bits_t>(encode_natural_length(k)) +
           static_cast<bits_t>(encode_natural_length(d_)) + header_cost();
  }

  bits_t data_cost(const Hypothesis& h, const DataSample& d) const override {
    const auto& s = d.pairs();
    auto mask = best_fit_mask(s, static_cast<unsigned>(h.params.at(0)));
    std::size_t misses = 0;
    for (bool b : mask) misses += b ? 0 : 1;
    return static_cast<bits_t>(misses) * 2.0 * d_;
  }

  std::vector<bool> classification(const Hypothesis& h, const DataSample& d) const override {
    return best_fit_mask(d.pairs(), static_cast<unsigned>(h.params.at(0)));
  }

  bits_t conditional_coder_cost() const override {
    return header_cost() + static_cast<bits_t>(encode_natural_length(d_)) +
           static_cast<bits_t>(encode_natural_length(max_degree_));
  }

  // point fits iff prediction and observation agree after rounding to d
  // fractional bits
  bool fits(double predicted, double observed) const {
    return quantize(predicted) == quantize(observed);
  }
  std::int64_t quantize(double v) const {
    double scaled = std::ldexp(v, static_cast<int>(d_));
    if (std::abs(scaled) > 4.6e18) throw std::invalid_argument("polynomial_class: coordinate overflows precision grid");
    return std::llround(scaled);
  }

 private:
  // fitted-point mask of the best degree-(k-1) polynomial for the sample. any
  // polynomial fitting >= k points interpolates some k-subset of them, so
  // scanning k-subsets is exhaustive; n <= k fits everything.
  std::vector<bool> best_fit_mask(const SupervisedPairs& s, unsigned k) const {
    const std::size_t n = s.x.size();
    if (n <= k) return std::vector<bool>(n, true);

    std::vector<bool> best_mask(n, false);
    std::size_t best = 0;
    if (k == 1) {
      // constant polynomial: the most common quantized y
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<bool> mask(n, false);
        std::size_t c = 0;
        for (std::size_t j = 0; j < n; ++j)
          if (quantize(s.y[j]) == quantize(s.y[i])) { mask[j] = true; ++c; }
        if (c > best) { best = c; best_mask = mask; }
      }
      return best_mask;
    }

    // k-subsets with distinct x, enumerated depth-first so newton divided
    // differences extend one column per chosen point. a leaf stops counting
    // once it provably cannot strictly beat the incumbent, and the final
    // subset is tried first so the incumbent is strong from the start.
    FitScan scan(*this, s, k);
    scan.seed_tail();
    scan.dfs(0, 0);
    return std::move(scan.best_mask);
  }

  struct FitScan {
    const PolynomialClass& cls;
    const SupervisedPairs& s;
    std::size_t n, k;
    std::vector<std::size_t> idx;           // chosen indices along the current branch
    std::vector<std::vector<double>> cols;  // cols[i][j] = f[x_{idx[j]}, .., x_{idx[i]}]
    std::vector<double> coeff;              // newton coefficients of the branch
    std::vector<bool> best_mask, mask;
    std::size_t best = 0;

    FitScan(const PolynomialClass& c, const SupervisedPairs& sample, unsigned kk)
        : cls(c), s(sample), n(sample.x.size()), k(kk), idx(k), cols(k), coeff(k),
          best_mask(n, false), mask(n, false) {
      for (std::size_t i = 0; i < k; ++i) cols[i].resize(i + 1);
    }

    bool push(std::size_t depth, std::size_t point) {
      idx[depth] = point;
      auto& col = cols[depth];
      col[depth] = s.y[point];
      for (std::size_t j = depth; j-- > 0;) {
        double dx = s.x[point] - s.x[idx[j]];
        if (dx == 0) return false;  // duplicate x, no interpolant through this subset
        col[j] = (col[j + 1] - cols[depth - 1][j]) / dx;
      }
      coeff[depth] = col[0];
      return true;
    }

    double eval(double at) const {
      double p = coeff[k - 1];
      for (std::size_t j = k - 1; j-- > 0;) p = coeff[j] + (at - s.x[idx[j]]) * p;
      return p;
    }

    void leaf() {
      std::size_t c = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (c + (n - j) <= best) return;
        if (cls.fits(eval(s.x[j]), s.y[j])) { mask[j] = true; ++c; } else { mask[j] = false; }
      }
      if (c > best) { best = c; best_mask = mask; }
    }

    void seed_tail() {
      for (std::size_t i = 0; i < k; ++i)
        if (!push(i, n - k + i)) return;
      leaf();
    }

    void dfs(std::size_t depth, std::size_t start) {
      for (std::size_t point = start; point + (k - depth) <= n; ++point) {
        if (!push(depth, point)) continue;
        if (depth + 1 == k) leaf();
        else dfs(depth + 1, point + 1);
      }
    }
  };

  unsigned max_degree_, d_;
  PolyCostMode mode_;
  std::string id_;
};

inline std::shared_ptr<ModelClass> polynomial_class(unsigned max_degree, unsigned d,
                                                    PolyCostMode mode = PolyCostMode::paper_example) {
  return std::make_shared<PolynomialClass>(max_degree, d, mode);
}

}  // namespace mdl
