// structure function tests. the reference profile is recomputed here from the
// raw descriptor catalog with its own cost arithmetic and minimization, no
// shared code with the library's level scan.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "mdl/models.hpp"
#include "mdl/set_family.hpp"
#include "mdl/structure.hpp"

using namespace mdl;

namespace {

BitString random_bits(std::mt19937_64& rng, std::size_t n) {
  BitString out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(rng() & 1);
  return out;
}

// hand cost table for the n=12 catalog: every descriptor pays the 6-bit class
// header; slices add a ceil(log2 13) = 4 bit count field, cylinders two bits
// per fixed position, patterns a self-delimited word, singletons the string
struct OracleEntry {
  double cost;
  double size;  // log2 of the set size
};

double log2_binom12(std::size_t k) {
  static const double table[] = {1, 12, 66, 220, 495, 792, 924, 792, 495, 220, 66, 12, 1};
  return std::log2(table[k]);
}

std::vector<OracleEntry> oracle_catalog(const BitString& x) {
  REQUIRE(x.size() == 12);
  std::vector<OracleEntry> out;
  out.push_back({6.0, 12.0});
  out.push_back({10.0, log2_binom12(x.count_ones())});
  for (std::size_t len = 1; len <= 12; ++len) out.push_back({2.0 * len + 6.0, 12.0 - len});
  for (std::size_t q = 1; 2 * q <= 12; ++q) {
    bool periodic = true;
    for (std::size_t i = 0; i < 12; ++i)
      if (x[i] != x[i % q]) periodic = false;
    if (!periodic) continue;
    double word_bits = std::floor(std::log2(static_cast<double>(q))) + 1.0;
    out.push_back({2.0 * word_bits + q + 6.0, 0.0});
  }
  out.push_back({18.0, 0.0});
  return out;
}

double oracle_level(const std::vector<OracleEntry>& catalog, int k) {
  double best = inf_bits;
  for (const auto& e : catalog)
    if (e.cost <= k + 1e-9) best = std::min(best, e.size);
  return best;
}

// minimal family exposing only {D}: exercises profiles over catalogs with no
// cheap sets at all
class SingletonOnly final : public ModelClass {
 public:
  const std::string& id() const override { return id_; }
  std::size_t registry_position() const override { return kRegistrySets; }
  std::vector<Hypothesis> enumerate(bits_t) const override { return {}; }
  std::vector<Hypothesis> enumerate_for(const DataSample& d, bits_t budget) const override {
    bits_t cost = static_cast<bits_t>(d.bits().size()) + header_cost();
    if (cost > budget + 1e-9) return {};
    return {{id_, 0, cost, "singleton " + d.bits().str(), {}}};
  }
  bits_t data_cost(const Hypothesis&, const DataSample&) const override { return 0.0; }
  bits_t conditional_coder_cost() const override { return header_cost(); }

 private:
  std::string id_ = "singleton-only";
};

}  // namespace

TEST_CASE("all-zeros profile over the descriptor catalog") {
  auto prof = structure_function(BitString::zeros(16), finite_set_family(16), 22);

  // run coder gives khat = 2 + 2 + 1 + 12
  CHECK(prof.khat_d == Catch::Approx(13.0));

  // levels: nothing below the 6-bit header; the full set at 6; the one-bit
  // cylinder at 8; the repeating-pattern descriptor reaches zero at 9
  for (int k = 0; k <= 5; ++k) CHECK(prof.points.at(k) == inf_bits);
  CHECK(prof.points.at(6) == Catch::Approx(16.0));
  CHECK(prof.points.at(7) == Catch::Approx(16.0));
  CHECK(prof.points.at(8) == Catch::Approx(15.0));
  for (int k = 9; k <= 22; ++k) CHECK(prof.points.at(k) == 0.0);
  CHECK(prof.witnesses.at(6).label == "full");
  CHECK(prof.witnesses.at(8).label == "cylinder 0");
  CHECK(prof.witnesses.at(9).label == "pattern 0");

  find_kmss(prof);
  REQUIRE(prof.k0.has_value());
  CHECK(*prof.k0 == 9);
  CHECK(prof.kmss->label == "pattern 0");
  CHECK(prof.kmss->model_cost == Catch::Approx(9.0));

  // sufficiency: the witness's log-size matches khat minus its model cost up
  // to the shared tolerance and registry slack
  double residual = 0.0 - (prof.khat_d - prof.kmss->model_cost);
  CHECK(std::abs(residual) <= prof.c + kRegistrySlack);
}

TEST_CASE("profiles are nonincreasing and stay above the complexity line") {
  std::mt19937_64 rng(73);
  auto family = finite_set_family(12);
  for (int trial = 0; trial < 20; ++trial) {
    auto prof = structure_function(random_bits(rng, 12), family, 26);
    bits_t prev = inf_bits;
    for (int k = 0; k <= 26; ++k) {
      bits_t v = prof.points.at(k);
      CHECK(v <= prev + 1e-9);
      CHECK(v >= 0.0);
      if (v != inf_bits) CHECK(v + k >= prof.khat_d - kRegistrySlack - 1e-9);
      prev = v;
    }
    // the singleton sits in the catalog, so high budgets always reach zero
    CHECK(prof.points.at(18) == 0.0);
  }
}

TEST_CASE("level scan matches the hand-rolled catalog recomputation") {
  std::mt19937_64 rng(79);
  auto family = finite_set_family(12);
  for (int trial = 0; trial < 50; ++trial) {
    BitString x = trial == 0 ? BitString::zeros(12) : trial == 1 ? BitString::ones(12) : random_bits(rng, 12);
    auto prof = structure_function(x, family, 26);
    auto catalog = oracle_catalog(x);
    for (int k = 0; k <= 26; ++k) {
      double want = oracle_level(catalog, k);
      if (want == inf_bits) {
        CHECK(prof.points.at(k) == inf_bits);
      } else {
        CHECK(prof.points.at(k) == Catch::Approx(want).margin(1e-9));
      }
    }

    // critical level against the same catalog
    find_kmss(prof);
    int want_k0 = -1;
    for (int k = 0; k <= 26 && want_k0 < 0; ++k) {
      double v = oracle_level(catalog, k);
      if (v != inf_bits && v + k <= prof.khat_d + 2.0 + 1e-9) want_k0 = k;
    }
    if (want_k0 < 0) {
      CHECK_FALSE(prof.k0.has_value());
    } else {
      REQUIRE(prof.k0.has_value());
      CHECK(*prof.k0 == want_k0);
      CHECK(prof.points.at(*prof.k0) == Catch::Approx(oracle_level(catalog, want_k0)).margin(1e-9));
    }
  }
}

TEST_CASE("balanced string over the slice family picks the halfway slice") {
  // eight ones in sixteen positions, runs kept short so no coder beats the
  // 2 + 10 + 16 literal: khat = 28
  BitString x("1001011010110100");
  REQUIRE(x.count_ones() == 8);
  auto prof = structure_function(x, counting_class(16), 30);
  CHECK(prof.khat_d == Catch::Approx(28.0));

  // slices cost ceil(log2 17) + 3 = 8 flat; only the k=8 slice holds x
  for (int k = 0; k <= 7; ++k) CHECK(prof.points.at(k) == inf_bits);
  for (int k = 8; k <= 30; ++k) CHECK(prof.points.at(k) == Catch::Approx(std::log2(12870.0)));

  find_kmss(prof);
  REQUIRE(prof.k0.has_value());
  CHECK(*prof.k0 == 8);
  CHECK(prof.kmss->label == "k=8");
  CHECK(prof.kmss->model_cost == Catch::Approx(8.0));

  // the halfway slice is a sufficient statistic: its log-size accounts for
  // khat minus the model cost within tolerance plus slack
  double residual = std::log2(12870.0) - (prof.khat_d - prof.kmss->model_cost);
  CHECK(std::abs(residual) <= prof.c + kRegistrySlack);
}

TEST_CASE("singleton-only family: the critical level is the singleton cost") {
  std::mt19937_64 rng(83);
  BitString x = random_bits(rng, 12);
  auto family = std::make_shared<SingletonOnly>();

  auto prof = structure_function(x, family, 20);
  for (int k = 0; k <= 17; ++k) CHECK(prof.points.at(k) == inf_bits);
  CHECK(prof.points.at(18) == 0.0);

  find_kmss(prof);
  REQUIRE(prof.k0.has_value());
  CHECK(*prof.k0 == 18);
  CHECK(prof.kmss->model_cost == Catch::Approx(18.0));

  // a budget cap below the singleton leaves every level empty: no critical
  // level to report
  auto capped = structure_function(x, family, 17);
  find_kmss(capped);
  CHECK_FALSE(capped.k0.has_value());
}

TEST_CASE("csv export and sparkline render the level map") {
  auto prof = structure_function(BitString::zeros(16), finite_set_family(16), 19);
  find_kmss(prof);

  auto csv = structure_csv(prof);
  CHECK(csv.rfind("k,K_k,witness\n0,inf,\n", 0) == 0);
  CHECK(csv.find("\n6,16,full\n") != std::string::npos);
  CHECK(csv.find("\n8,15,cylinder 0\n") != std::string::npos);
  CHECK(csv.find("\n9,0,pattern 0\n") != std::string::npos);
  std::size_t lines = 0;
  for (char ch : csv)
    if (ch == '\n') ++lines;
  CHECK(lines == 21);  // header plus k = 0..19

  CHECK(structure_sparkline(prof) == "!!!!!!@@%___________");
}
