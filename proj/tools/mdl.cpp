// command line front door: load bitstring or csv inputs, drive the selectors,
// structure function, randomness tests, predictors, and raw codecs, and emit
// byte-stable json (costs as 12-digit decimal strings) with the exit-code
// contract 0 = ok, 1 = bad input, 2 = no feasible hypothesis.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mdl/mdl.hpp"

using nlohmann::ordered_json;
using namespace mdl;

namespace {

constexpr int kSchemaVersion = 1;

ordered_json cost_json(bits_t v) { return format_bits(v); }

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open input file: " + path);
  return in;
}

BitString load_bitstring(const std::string& path) {
  auto in = open_input(path);
  auto strings = read_bits_text(in);
  return strings.empty() ? BitString() : strings[0];
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

DataSample load_sample(const std::string& path) {
  if (ends_with(path, ".csv")) {
    auto in = open_input(path);
    try {
      return DataSample{read_pairs_csv(in)};
    } catch (const std::exception& e) {
      throw std::invalid_argument("cannot parse csv '" + path + "': " + e.what());
    }
  }
  return DataSample{load_bitstring(path)};
}

ordered_json input_json(const std::string& path, const DataSample& d) {
  ordered_json j;
  j["path"] = path;
  if (d.is_bits()) {
    j["kind"] = "bits";
    j["length"] = d.bits().size();
  } else {
    j["kind"] = "pairs";
    j["rows"] = d.pairs().x.size();
    j["precision_bits"] = d.pairs().precision_bits;
  }
  return j;
}

// a polynomial spec without max_degree gets one from the sample so the full
// interpolant is always on the table
ClassRegistry build_registry(const std::vector<std::string>& specs, const DataSample& d) {
  ClassRegistry reg;
  for (std::string spec : specs) {
    if (spec.rfind("polynomial", 0) == 0 && spec.find("max_degree") == std::string::npos && !d.is_bits()) {
      std::size_t rows = d.pairs().x.size();
      spec += (spec.find(':') == std::string::npos ? ":" : ",");
      spec += "max_degree=" + std::to_string(rows > 0 ? rows - 1 : 0);
    }
    reg.add(parse_class_spec(spec));
  }
  return reg;
}

void emit_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
  out << text;
}

void emit_json(const ordered_json& j, const std::string& out_path) { emit_text(j.dump(2) + "\n", out_path); }

ordered_json row_json(const HypothesisRow& row, bool with_margin) {
  ordered_json j;
  j["class"] = row.hyp.class_id;
  j["index"] = row.hyp.index;
  j["label"] = row.hyp.label;
  j["model_cost"] = cost_json(row.model_cost);
  j["data_cost"] = cost_json(row.data_cost);
  j["total"] = cost_json(row.total);
  j["posterior"] = cost_json(row.posterior);
  if (with_margin) j["margin"] = cost_json(row.margin);
  return j;
}

struct SelectArgs {
  std::string rule = "mdl";
  std::vector<std::string> classes;
  std::string in, out, prior = "proxy";
  double budget = std::numeric_limits<double>::infinity();
  double tolerance = 2.0;
};

int run_select(const SelectArgs& a) {
  DataSample d = load_sample(a.in);
  ClassRegistry classes = build_registry(a.classes, d);

  SelectionReport rep;
  if (a.rule == "mdl") {
    rep = select_mdl(classes, d, a.budget);
  } else if (a.rule == "map") {
    PriorSpec prior = a.prior == "uniform" ? PriorSpec::uniform() : PriorSpec::universal_proxy();
    rep = select_map(classes, d, prior, a.budget);
  } else if (a.rule == "gkmss") {
    ComplexityRegistry kreg;
    for (const auto& cls : classes.classes()) kreg.register_two_part(cls);
    rep = select_gkmss(classes, d, kreg, a.tolerance, a.budget);
  } else {
    rep = select_emdl(classes, d, a.budget);
  }

  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "select";
  j["rule"] = rep.rule;
  j["input"] = input_json(a.in, d);
  ordered_json ids = ordered_json::array();
  for (const auto& cls : classes.classes()) ids.push_back(cls->id());
  j["classes"] = ids;
  bool gk = rep.rule == "gkmss";
  j["winner"] = row_json(rep.winner(), gk);
  ordered_json table = ordered_json::array();
  for (const auto& row : rep.table) table.push_back(row_json(row, gk));
  j["table"] = table;
  j["tie_trace"] = rep.tie_trace;
  if (gk) {
    j["khat"] = cost_json(rep.khat_d);
    j["tolerance"] = cost_json(a.tolerance);
  }
  if (rep.rule == "map") {
    j["alpha_hat"] = cost_json(rep.alpha_hat);
    j["posterior_ratio"] = cost_json(rep.posterior_ratio);
    j["posterior_ratio_ok"] = rep.posterior_ratio_ok;
  }
  if (rep.rule == "emdl") j["emdl_diverges"] = rep.emdl_diverges;
  emit_json(j, a.out);
  return 0;
}

struct StructureArgs {
  std::string cls, in, out, csv;
  int kmax = -1;
  double c = 2.0;
};

int run_structure(const StructureArgs& a) {
  BitString x = load_bitstring(a.in);
  auto family = parse_class_spec(a.cls);
  int kmax = a.kmax >= 0 ? a.kmax : static_cast<int>(x.size()) + 8;
  StructureProfile prof = structure_function(x, family, kmax);
  find_kmss(prof, a.c);

  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "structure";
  j["class"] = family->id();
  j["input"] = ordered_json{{"path", a.in}, {"kind", "bits"}, {"length", x.size()}};
  j["khat"] = cost_json(prof.khat_d);
  j["kmax"] = prof.kmax;
  j["c"] = cost_json(prof.c);
  if (prof.k0)
    j["k0"] = *prof.k0;
  else
    j["k0"] = nullptr;
  if (prof.kmss) {
    j["kmss"] = ordered_json{{"label", prof.kmss->label}, {"model_cost", cost_json(prof.kmss->model_cost)}};
  } else {
    j["kmss"] = nullptr;
  }
  ordered_json points = ordered_json::array();
  for (const auto& [k, size] : prof.points) {
    ordered_json p;
    p["k"] = k;
    p["log_size"] = cost_json(size);
    auto w = prof.witnesses.find(k);
    p["witness"] = w == prof.witnesses.end() ? "" : w->second.label;
    points.push_back(p);
  }
  j["points"] = points;
  j["sparkline"] = structure_sparkline(prof);
  if (!a.csv.empty()) emit_text(structure_csv(prof), a.csv);
  emit_json(j, a.out);
  return 0;
}

struct RandtestArgs {
  std::string test, in, out, dist = "uniform", hyp;
  bool sum_test = false;
};

ordered_json deficiency_json(const DeficiencyReport& rep) {
  ordered_json j;
  j["distribution"] = rep.distribution;
  j["value"] = cost_json(rep.value);
  j["neg_log_p"] = cost_json(rep.neg_log_p);
  j["khat_term"] = cost_json(rep.khat_term);
  j["threshold"] = cost_json(rep.threshold);
  j["atypical"] = rep.atypical;
  return j;
}

int run_randtest(const RandtestArgs& a) {
  BitString x = load_bitstring(a.in);
  ComplexityRegistry kreg;
  MLTestRegistry tests{initial_zeros_test(), odd_positions_test(), frequency_test(), compression_test(kreg)};

  // flag spelling uses underscores, registry ids use hyphens
  std::string want = a.test;
  for (auto& ch : want)
    if (ch == '_') ch = '-';

  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "randtest";
  j["test"] = want;
  j["input"] = ordered_json{{"path", a.in}, {"kind", "bits"}, {"length", x.size()}};

  std::shared_ptr<MLTest> chosen;
  if (want == "universal") {
    j["level"] = universal_test(tests, x);
  } else {
    for (const auto& t : tests)
      if (t->id() == want) chosen = t;
    if (!chosen) throw std::invalid_argument("unknown test: " + want);
    j["level"] = chosen->evaluate(x);
  }

  if (a.sum_test) {
    if (!chosen) throw std::invalid_argument("--sum-test needs a specific test, not universal");
    auto uniform = [](const BitString& s) { return std::exp2(-static_cast<double>(s.size())); };
    SumTest st = to_sum_test(chosen, uniform, 10);
    j["sum_test"] = ordered_json{{"c", st.c}, {"level", cost_json(st.evaluate(x))}};
  }

  if (a.dist == "uniform") {
    j["deficiency"] = deficiency_json(deficiency(x, kreg));
  } else {
    auto cls = parse_class_spec(a.dist);
    if (a.hyp.empty()) throw std::invalid_argument("--dist with a model class needs --hyp=<label>");
    Hypothesis picked;
    bool found = false;
    for (auto& h : cls->enumerate(inf_bits))
      if (h.label == a.hyp) {
        picked = h;
        found = true;
        break;
      }
    if (!found) throw std::invalid_argument("no hypothesis labeled '" + a.hyp + "' in " + cls->id());
    j["deficiency"] = deficiency_json(deficiency(*cls, picked, x, kreg));
    FIReport fi = fi_check(*cls, picked, x, PriorSpec::universal_proxy(), kreg);
    ordered_json f;
    f["lower"] = cost_json(fi.lower);
    f["middle"] = cost_json(fi.middle);
    f["upper"] = cost_json(fi.upper);
    f["alpha_hat"] = cost_json(fi.alpha_hat);
    f["registry_slack"] = cost_json(kRegistrySlack);
    f["data_deficiency"] = cost_json(fi.data_deficiency);
    f["prior_deficiency"] = cost_json(fi.prior_deficiency);
    f["holds"] = fi.holds;
    f["admissible"] = fi.admissible;
    j["fi"] = f;
  }
  j["codecs"] = kreg.codec_ids();
  emit_json(j, a.out);
  return 0;
}

struct PredictArgs {
  std::vector<std::string> classes;
  std::string in, out, curve, experiment;
  unsigned horizon = 1;
  std::size_t trials = 50, n = 256;
  std::int64_t seed = -1;
  std::int64_t mu_index = -1;
  double mu_p = -1;
};

int run_predict(const PredictArgs& a) {
  ClassRegistry classes = build_registry(a.classes, DataSample{BitString()});
  auto first = parse_class_spec(a.classes.at(0));

  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "predict";
  ordered_json ids = ordered_json::array();
  for (const auto& cls : classes.classes()) ids.push_back(cls->id());
  j["classes"] = ids;

  if (!a.in.empty()) {
    BitString x = load_bitstring(a.in);
    MixturePredictor pred = MixturePredictor::from_class(*first);
    auto records = prediction_records(classes, pred, x, a.horizon);
    j["mode"] = "extrapolate";
    j["input"] = ordered_json{{"path", a.in}, {"kind", "bits"}, {"length", x.size()}};
    j["horizon"] = a.horizon;
    j["two_part_choice"] = predict_mdl(classes, x, a.horizon).str();
    j["mixture_choice"] = predict_mixture(pred, x, a.horizon).str();
    ordered_json recs = ordered_json::array();
    for (const auto& rec : records) {
      ordered_json r;
      r["candidate"] = rec.candidate.str();
      r["mixture_conditional"] = cost_json(rec.mixture_conditional);
      r["two_part_delta"] = cost_json(rec.two_part_delta);
      r["chosen_by_mixture"] = rec.chosen_by_mixture;
      r["chosen_by_two_part"] = rec.chosen_by_two_part;
      recs.push_back(r);
    }
    j["records"] = recs;
    emit_json(j, a.out);
    return 0;
  }

  // experiment modes sample histories and need an explicit seed
  std::string mode = a.experiment.empty() ? "sn" : a.experiment;
  if (a.seed < 0) throw std::invalid_argument("--seed is required for sampled experiments");
  auto seed = static_cast<std::uint64_t>(a.seed);

  std::vector<MixtureComponent> comps;
  for (auto& h : first->enumerate(inf_bits)) {
    auto p = first->predictor(h);
    if (!p) continue;
    double w = std::exp2(-h.model_cost);
    comps.push_back({std::move(h), std::shared_ptr<BitPredictor>(std::move(p)), w});
  }
  if (comps.empty()) throw std::invalid_argument("class has no sequential predictors: " + first->id());
  std::size_t mu = a.mu_index >= 0 ? static_cast<std::size_t>(a.mu_index) : comps.size() / 2;
  if (mu >= comps.size()) throw std::invalid_argument("--mu-index out of range");
  if (a.mu_p >= 0) comps[mu].prototype = std::make_shared<FixedBernoulli>(a.mu_p);
  ordered_json mu_json{{"index", mu}, {"label", comps[mu].hyp.label}};
  if (a.mu_p >= 0) mu_json["replaced_with"] = cost_json(a.mu_p);
  MixturePredictor pred(comps, MixturePredictor::Weighting::kNormalized);

  j["mode"] = mode;
  j["mu"] = mu_json;
  j["components"] = comps.size();
  j["n"] = a.n;
  j["trials"] = a.trials;
  j["seed"] = seed;

  if (mode == "sn") {
    SnReport rep = sn_experiment(pred, mu, a.n, a.trials, seed);
    j["bound"] = cost_json(rep.bound);
    j["sigma"] = cost_json(rep.sigma);
    j["total"] = cost_json(rep.total);
    j["within_bound"] = rep.total <= rep.bound + 3.0 * rep.sigma;
    if (!a.curve.empty()) {
      std::string csv = "n,s_n,cumulative,bound\n";
      for (std::size_t i = 0; i < rep.per_step.size(); ++i)
        csv += std::to_string(i + 1) + "," + format_bits(rep.per_step[i]) + "," + format_bits(rep.cumulative[i]) +
               "," + format_bits(rep.bound) + "\n";
      emit_text(csv, a.curve);
    }
  } else if (mode == "convergence") {
    ConvergenceReport rep = convergence_experiment(pred, mu, a.n, a.trials, seed);
    j["checkpoints"] = rep.checkpoints;
    ordered_json medians = ordered_json::array();
    for (double v : rep.median_abs_dev) medians.push_back(cost_json(v));
    j["median_abs_dev"] = medians;
    if (!a.curve.empty()) {
      std::string csv = "n,median_abs_dev\n";
      for (std::size_t i = 0; i < rep.checkpoints.size(); ++i)
        csv += std::to_string(rep.checkpoints[i]) + "," + format_bits(rep.median_abs_dev[i]) + "\n";
      emit_text(csv, a.curve);
    }
  } else if (mode == "agreement") {
    AgreementReport rep = agreement_experiment(classes, pred, *comps[mu].prototype, a.n, a.horizon, a.trials, seed);
    j["horizon"] = a.horizon;
    j["rate"] = cost_json(rep.rate);
    j["disagreements"] = rep.disagreements;
  } else {
    throw std::invalid_argument("unknown experiment: " + mode);
  }
  emit_json(j, a.out);
  return 0;
}

struct CodesArgs {
  std::string operation, in, out, model = "kt0";
  std::uint64_t value = 0;
};

int run_codes(const CodesArgs& a) {
  if (a.operation == "encode-natural") {
    emit_text(encode_natural(a.value).str() + "\n", a.out);
    return 0;
  }
  BitString x = load_bitstring(a.in);
  if (a.operation == "encode-standard") {
    emit_text(encode_standard(x).str() + "\n", a.out);
  } else if (a.operation == "decode-standard") {
    auto [payload, rest] = decode_standard(x);
    if (!rest.empty()) throw std::invalid_argument("decode-standard: trailing bits after the codeword");
    emit_text(payload.str() + "\n", a.out);
  } else if (a.operation == "decode-natural") {
    auto [n, rest] = decode_natural(x);
    if (!rest.empty()) throw std::invalid_argument("decode-natural: trailing bits after the codeword");
    emit_text(std::to_string(n) + "\n", a.out);
  } else if (a.operation == "arith-roundtrip") {
    std::unique_ptr<BitPredictor> model;
    if (a.model == "kt0")
      model = std::make_unique<KTBernoulli>();
    else if (a.model == "kt1")
      model = std::make_unique<KTContext>(1);
    else
      throw std::invalid_argument("unknown model: " + a.model);
    BitString code = arithmetic_encode(x, *model);
    BitString back = arithmetic_decode(code, *model, x.size());
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "codes";
    j["operation"] = a.operation;
    j["model"] = a.model;
    j["input_bits"] = x.size();
    j["code_bits"] = code.size();
    j["ideal_bits"] = cost_json(model_log_loss(x, *model));
    j["ok"] = back == x;
    emit_json(j, a.out);
    if (back != x) return 1;
  } else {
    throw std::invalid_argument("unknown codes operation: " + a.operation);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-part code model selection, structure functions, randomness tests, and prediction"};
  app.require_subcommand(1);

  SelectArgs sa;
  auto* sel = app.add_subcommand("select", "pick a hypothesis by a selection rule");
  sel->add_option("--rule", sa.rule)->check(CLI::IsMember({"mdl", "map", "gkmss", "emdl"}));
  sel->add_option("--class", sa.classes, "model class spec, repeatable")->required();
  sel->add_option("--in", sa.in, "bitstring file or x,y csv")->required();
  sel->add_option("--budget", sa.budget, "model cost cap in bits");
  sel->add_option("--tolerance", sa.tolerance, "gkmss sufficiency tolerance in bits");
  sel->add_option("--prior", sa.prior)->check(CLI::IsMember({"proxy", "uniform"}));
  sel->add_option("--out", sa.out, "report path, stdout when omitted");

  StructureArgs ta;
  auto* str = app.add_subcommand("structure", "level map of best set descriptions by model cost");
  str->add_option("--class", ta.cls, "set family spec")->required();
  str->add_option("--in", ta.in)->required();
  str->add_option("--kmax", ta.kmax, "largest model budget on the axis");
  str->add_option("--c", ta.c, "sufficiency slack in bits");
  str->add_option("--csv", ta.csv, "also write the level map as csv");
  str->add_option("--out", ta.out);

  RandtestArgs ra;
  auto* rt = app.add_subcommand("randtest", "run a randomness test and deficiency report");
  rt->add_option("--test", ra.test)
      ->required()
      ->check(CLI::IsMember({"initial_zeros", "odd_positions", "initial-zeros", "odd-positions", "frequency",
                             "compression", "universal"}));
  rt->add_option("--in", ra.in)->required();
  rt->add_option("--dist", ra.dist, "uniform or a model class spec");
  rt->add_option("--hyp", ra.hyp, "hypothesis label inside --dist");
  rt->add_flag("--sum-test", ra.sum_test, "include the sum-test conversion constant");
  rt->add_option("--out", ra.out);

  PredictArgs pa;
  auto* pr = app.add_subcommand("predict", "extrapolate a prefix or run sampled experiments");
  pr->add_option("--class", pa.classes, "model class spec, repeatable")->required();
  pr->add_option("--in", pa.in, "prefix to extrapolate; omit to run an experiment");
  pr->add_option("--horizon", pa.horizon)->check(CLI::Range(1, 12));
  pr->add_option("--experiment", pa.experiment)->check(CLI::IsMember({"sn", "convergence", "agreement"}));
  pr->add_option("--trials", pa.trials)->check(CLI::PositiveNumber);
  pr->add_option("--n", pa.n, "history length")->check(CLI::PositiveNumber);
  pr->add_option("--seed", pa.seed, "rng seed, required for experiments");
  pr->add_option("--mu-index", pa.mu_index, "true component, middle of the grid when omitted");
  pr->add_option("--mu-p", pa.mu_p, "replace the true component with an exact coin");
  pr->add_option("--curve", pa.curve, "write the experiment curve as csv");
  pr->add_option("--out", pa.out);

  CodesArgs ca;
  auto* co = app.add_subcommand("codes", "raw self-delimiting and arithmetic coding");
  co->add_option("operation", ca.operation)
      ->required()
      ->check(CLI::IsMember(
          {"encode-standard", "decode-standard", "encode-natural", "decode-natural", "arith-roundtrip"}));
  co->add_option("--in", ca.in);
  co->add_option("--value", ca.value, "integer for encode-natural");
  co->add_option("--model", ca.model)->check(CLI::IsMember({"kt0", "kt1"}));
  co->add_option("--out", ca.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sel->parsed()) return run_select(sa);
    if (str->parsed()) return run_structure(ta);
    if (rt->parsed()) return run_randtest(ra);
    if (pr->parsed()) return run_predict(pa);
    if (co->parsed()) return run_codes(ca);
  } catch (const NoFeasibleHypothesis& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NoSufficientStatistic& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
