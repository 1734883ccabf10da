#pragma once

// The bundled experiment corpus: JSON loading with rulebook cross-checks at
// load time, a single runner over the three experiment kinds, and the JSON
// payload of each report.

#include <chrono>
#include <fstream>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "bvlab/holder.hpp"
#include "bvlab/operators.hpp"
#include "bvlab/rulebook.hpp"

namespace bvlab {

using nlohmann::json;

struct CloudSpec {
  std::size_t count = 20;
  double radius = 1.0;
};

struct ClassificationExperiment {
  std::string id;
  GeneratorSpec generator;
  double alpha = 1.0;
  std::vector<double> deltas;
  std::vector<double> radii;
  std::vector<CloudSpec> clouds;
  bool include_global = false;
  double sample_radius = 10.0;
  std::size_t pairs = 500;
  std::map<HolderRegime, double> candidates;
  std::map<HolderRegime, EmpiricalVerdict> expect;  // every regime of that kind must match
};

enum class ExperimentKind { Acting, Boundedness, Classification };

inline std::string kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Acting: return "acting";
    case ExperimentKind::Boundedness: return "boundedness";
    case ExperimentKind::Classification: return "classification";
  }
  return "?";
}

struct Experiment {
  std::string id;
  ExperimentKind kind;
  std::string anchor;  // short description of what the experiment replays
  std::variant<ActingExperiment, BoundednessExperiment, ClassificationExperiment> spec;
};

// ---------------------------------------------------------------------------
// Loading

namespace detail {

inline std::map<std::string, double> number_map(const json& j) {
  std::map<std::string, double> out;
  if (j.is_null()) return out;
  if (!j.is_object()) throw ConfigError("expected an object of numbers");
  for (const auto& [k, v] : j.items()) {
    if (v.is_boolean()) {
      out[k] = v.get<bool>() ? 1.0 : 0.0;
    } else if (v.is_number()) {
      out[k] = v.get<double>();
    } else {
      throw ConfigError("parameter '" + k + "' must be a number");
    }
  }
  return out;
}

inline GeneratorSpec parse_generator(const json& j) {
  if (j.is_string()) return {j.get<std::string>(), {}};
  return {j.at("id").get<std::string>(), number_map(j.value("params", json()))};
}

inline ComparatorSpec parse_comparator(const json& j) {
  if (j.is_string()) return {j.get<std::string>(), {}};
  return {j.at("id").get<std::string>(), number_map(j.value("params", json()))};
}

inline EmpiricalVerdict parse_empirical(const std::string& s) {
  if (s == "consistent-with") return EmpiricalVerdict::ConsistentWith;
  if (s == "refuted-by-witness") return EmpiricalVerdict::RefutedByWitness;
  if (s == "not-checkable") return EmpiricalVerdict::NotCheckable;
  throw ConfigError("unknown empirical verdict '" + s + "'");
}

inline Experiment parse_experiment(const json& j) {
  Experiment e;
  e.id = j.at("id").get<std::string>();
  e.anchor = j.value("anchor", "");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "acting") {
    e.kind = ExperimentKind::Acting;
    ActingExperiment a;
    a.id = e.id;
    a.generator = parse_generator(j.at("generator"));
    const auto& in = j.at("input");
    if (in.contains("embed")) {
      a.input.embed_values = in["embed"].get<std::vector<double>>();
      a.input.embed_p = in.value("p", 2.0);
    } else {
      a.input.seq = CatalogSeqId{in.at("id").get<std::string>(), number_map(in.value("params", json()))};
    }
    a.from = SpaceKind::parse(j.at("from").get<std::string>());
    a.to = SpaceKind::parse(j.at("to").get<std::string>());
    a.horizon = j.value("horizon", 1000);
    if (j.contains("input_comparator")) a.input_comparator = parse_comparator(j["input_comparator"]);
    if (j.contains("comparator")) a.comparator = parse_comparator(j["comparator"]);
    a.anchors_from_embedding = j.value("anchors_from_embedding", false);
    a.expectation = parse_expectation(j.at("expectation").get<std::string>());
    a.notes = j.value("notes", "");
    e.spec = a;
  } else if (kind == "boundedness") {
    e.kind = ExperimentKind::Boundedness;
    BoundednessExperiment b;
    b.id = e.id;
    b.generator = parse_generator(j.at("generator"));
    const auto& fam = j.at("family");
    b.family.kind = fam.at("kind").get<std::string>();
    b.family.u = fam.value("u", 1.0);
    b.family.w = fam.value("w", 0.0);
    b.family.lead_zeros = fam.value("lead_zeros", 0);
    b.family.unit = fam.value("unit", 0);
    b.n_min = j.at("n_min").get<Index>();
    b.n_max = j.at("n_max").get<Index>();
    b.from = SpaceKind::parse(j.at("from").get<std::string>());
    b.to = SpaceKind::parse(j.at("to").get<std::string>());
    b.input_bound = j.at("input_bound").get<double>();
    b.growth = parse_comparator(j.at("growth"));
    b.scale_by_jump = j.value("scale_by_jump", false);
    b.table = parse_table(j.value("table", "local_bounded"));
    b.expectation = parse_expectation(j.at("expectation").get<std::string>());
    b.generic_check_max = j.value("generic_check_max", 20);
    e.spec = b;
  } else if (kind == "classification") {
    e.kind = ExperimentKind::Classification;
    ClassificationExperiment c;
    c.id = e.id;
    c.generator = parse_generator(j.at("generator"));
    c.alpha = j.at("alpha").get<double>();
    c.deltas = j.value("deltas", std::vector<double>{});
    c.radii = j.value("radii", std::vector<double>{});
    for (const auto& cl : j.value("clouds", json::array())) {
      c.clouds.push_back({cl.value("count", std::size_t{20}), cl.value("radius", 1.0)});
    }
    c.include_global = j.value("global", false);
    c.sample_radius = j.value("sample_radius", 10.0);
    c.pairs = j.value("pairs", std::size_t{500});
    for (const auto& [k, v] : j.at("candidates").items()) c.candidates[parse_regime(k)] = v.get<double>();
    for (const auto& [k, v] : j.at("expect").items()) {
      c.expect[parse_regime(k)] = parse_empirical(v.get<std::string>());
    }
    e.spec = c;
  } else {
    throw ConfigError("experiment " + e.id + ": unknown kind '" + kind + "'");
  }
  return e;
}

}  // namespace detail

/// Parses the corpus and cross-checks every acting and boundedness
/// expectation against the rulebook; a disagreement is a configuration error.
inline std::vector<Experiment> load_experiments(const json& j, const Rulebook& rb = Rulebook::bundled()) {
  std::vector<Experiment> out;
  if (!j.contains("experiments") || !j["experiments"].is_array()) {
    throw ConfigError("corpus needs an 'experiments' array");
  }
  for (const auto& item : j["experiments"]) {
    Experiment e;
    try {
      e = detail::parse_experiment(item);
    } catch (const json::exception& ex) {
      throw ConfigError(std::string("malformed experiment: ") + ex.what());
    }
    RuleCrossCheck cc;
    if (e.kind == ExperimentKind::Acting) cc = cross_check_acting(std::get<ActingExperiment>(e.spec), rb);
    if (e.kind == ExperimentKind::Boundedness) cc = cross_check_boundedness(std::get<BoundednessExperiment>(e.spec), rb);
    if (!cc.ok()) {
      throw ConfigError("experiment " + e.id + ": expectation contradicts the rulebook (" + cc.condition + " is " +
                        cc.decision + (cc.detail.empty() ? "" : "; " + cc.detail) + ")");
    }
    for (const auto& prev : out) {
      if (prev.id == e.id) throw ConfigError("duplicate experiment id " + e.id);
    }
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(), [](const Experiment& a, const Experiment& b) { return a.id < b.id; });
  return out;
}

inline std::string default_corpus_path() {
  if (const char* dir = std::getenv("BVLAB_DATA_DIR")) return std::string(dir) + "/experiments.json";
  return std::string(BVLAB_DATA_DIR) + "/experiments.json";
}

inline std::vector<Experiment> load_experiments_file(const std::string& path = default_corpus_path(),
                                                     const Rulebook& rb = Rulebook::bundled()) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open experiment corpus " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("corpus " + path + ": " + e.what());
  }
  return load_experiments(j, rb);
}

// ---------------------------------------------------------------------------
// JSON payloads

/// Trace points kept in reports: the first 100, the last 100, and every k-th
/// in between with k = max(1, N / 1000).
inline std::vector<Index> downsample_indices(Index N) {
  std::vector<Index> out;
  const Index k = std::max<Index>(1, N / 1000);
  for (Index n = 1; n <= N; ++n) {
    if (n <= 100 || n + 100 > N || n % k == 0) out.push_back(n);
  }
  return out;
}

namespace detail {

inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json trace_json(const PartialTrace& t) {
  json pts = json::array();
  for (Index n : downsample_indices(t.values.size())) pts.push_back({n, t.at(n)});
  json j{{"kind", t.kind_name()}, {"horizon", t.horizon}, {"last", t.last()}, {"points", pts}};
  if (t.kind != NormKind::Sup) j["p"] = t.p;
  return j;
}

inline json certificate_json(const Certificate& c) {
  json j{{"verdict", verdict_name(c.verdict)},
         {"comparator", c.comparator_id},
         {"formula", c.comparator_formula},
         {"onset", c.onset},
         {"crossing_index", c.crossing_index},
         {"checked_until", c.checked_until},
         {"note", c.note}};
  j["bound"] = c.bound ? number_or_null(*c.bound) : json(nullptr);
  j["observed_sum"] = c.observed_sum ? number_or_null(*c.observed_sum) : json(nullptr);
  j["comparator_sum"] = c.comparator_sum ? number_or_null(*c.comparator_sum) : json(nullptr);
  return j;
}

inline json element_json(const SpaceElement& e) {
  json coords = json::array();
  const auto& sup = e.support();
  const auto& val = e.coords();
  if (e.space().sparse()) {
    for (std::size_t i = 0; i < sup.size(); ++i) coords.push_back({sup[i], val[i]});
    return {{"support", coords}};
  }
  return {{"coords", val}};
}

inline json rulebook_json(const RuleCrossCheck& c) {
  return {{"status", c.status}, {"condition", c.condition}, {"row", c.row}, {"decision", c.decision},
          {"detail", c.detail}};
}

inline json classification_json(const ClassificationReport& rep) {
  json regimes = json::array();
  for (const auto& r : rep.regimes) {
    json w = nullptr;
    if (r.estimate.witness) w = json::array({element_json(r.estimate.witness->first), element_json(r.estimate.witness->second)});
    regimes.push_back({{"kind", regime_name(r.kind)},
                       {"delta_or_radius", number_or_null(r.delta_or_radius)},
                       {"candidate", r.candidate},
                       {"L_hat", number_or_null(r.estimate.L_hat)},
                       {"pairs_checked", r.estimate.pairs_checked},
                       {"witness", w},
                       {"verdict", empirical_verdict_name(r.verdict)}});
  }
  return {{"generator_id", rep.generator_id}, {"alpha", rep.alpha}, {"regimes", regimes}};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Running

struct RunOptions {
  std::optional<Index> horizon;  // overrides acting experiments' horizons
  std::uint64_t seed = 1;        // classification sampling
};

struct Outcome {
  std::string id;
  ExperimentKind kind;
  bool passed = false;
  std::string mismatch;
  json report;                      // deterministic payload
  std::vector<std::pair<Index, double>> csv;  // n,value rows for plain-text output
  double wall_ms = 0.0;
};

inline Outcome run_experiment(const Experiment& e, const RunOptions& opt = {},
                              const Rulebook& rb = Rulebook::bundled()) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o{e.id, e.kind, false, {}, json::object(), {}, 0.0};
  json cfg{{"seed", opt.seed}};
  json& rep = o.report;
  rep["experiment_id"] = e.id;
  rep["kind"] = kind_name(e.kind);
  rep["anchor"] = e.anchor;

  if (e.kind == ExperimentKind::Acting) {
    const auto& a = std::get<ActingExperiment>(e.spec);
    const ActingResult r = run_acting_experiment(a, opt.horizon, rb);
    cfg["generator"] = a.generator.id;
    cfg["generator_params"] = a.generator.params;
    cfg["from"] = a.from.name();
    cfg["to"] = a.to.name();
    cfg["horizon"] = r.horizon;
    cfg["expectation"] = expectation_name(a.expectation);
    cfg["comparator"] = a.comparator ? json(a.comparator->id) : json(nullptr);
    rep["traces"] = {{"input", detail::trace_json(r.input.trace)}, {"output", detail::trace_json(r.output.trace)}};
    rep["input_certificate"] = detail::certificate_json(r.input.certificate);
    rep["certificate"] = detail::certificate_json(r.output.certificate);
    rep["rulebook"] = detail::rulebook_json(r.rulebook);
    if (r.embedding) {
      json idx = json::array();
      for (BigIndex i : r.embedding->idx) idx.push_back(to_string(i));
      rep["embedding"] = {{"idx", idx}, {"budget_total", r.embedding->budget_total()}};
    }
    for (Index n : downsample_indices(r.output.trace.values.size())) o.csv.emplace_back(n, r.output.trace.at(n));
    o.passed = r.matched;
    o.mismatch = r.mismatch;
  } else if (e.kind == ExperimentKind::Boundedness) {
    const auto& b = std::get<BoundednessExperiment>(e.spec);
    const BoundednessResult r = run_boundedness_experiment(b, rb);
    cfg["generator"] = b.generator.id;
    cfg["generator_params"] = b.generator.params;
    cfg["family"] = b.family.kind;
    cfg["from"] = b.from.name();
    cfg["to"] = b.to.name();
    cfg["n_min"] = b.n_min;
    cfg["n_max"] = b.n_max;
    cfg["input_bound"] = b.input_bound;
    cfg["expectation"] = expectation_name(b.expectation);
    cfg["comparator"] = b.growth.id;
    json rows = json::array();
    for (Index i : downsample_indices(r.rows.size())) {
      const auto& row = r.rows[i - 1];
      rows.push_back({row.n, row.input_norm, row.output_norm, row.reference});
      o.csv.emplace_back(row.n, row.output_norm);
    }
    rep["table_columns"] = {"n", "input_norm", "output_norm", "comparator"};
    rep["table"] = rows;
    rep["jump"] = r.jump;
    rep["closed_form_checked_up_to"] = r.generic_checked;
    rep["rulebook"] = detail::rulebook_json(r.rulebook);
    o.passed = r.matched;
    o.mismatch = r.mismatch;
  } else {
    const auto& c = std::get<ClassificationExperiment>(e.spec);
    const Generator f = c.generator.build();
    ClassifyConfig cc;
    cc.alpha = c.alpha;
    cc.deltas = c.deltas;
    cc.radii = c.radii;
    cc.include_global = c.include_global;
    cc.sample_radius = c.sample_radius;
    cc.pairs = c.pairs;
    cc.seed = opt.seed;
    cc.candidates = c.candidates;
    for (std::size_t i = 0; i < c.clouds.size(); ++i) {
      Sampler rng(opt.seed + 1000 + i);
      std::vector<SpaceElement> cloud;
      for (std::size_t k = 0; k < c.clouds[i].count; ++k) cloud.push_back(rng.point(f.space, c.clouds[i].radius));
      cc.clouds.push_back(std::move(cloud));
    }
    const ClassificationReport r = classify_generator(f, cc);
    cfg["generator"] = c.generator.id;
    cfg["alpha"] = c.alpha;
    cfg["pairs"] = c.pairs;
    rep["classification"] = detail::classification_json(r);
    for (std::size_t i = 0; i < r.regimes.size(); ++i) {
      const auto& reg = r.regimes[i];
      o.csv.emplace_back(i + 1, reg.estimate.L_hat);
      auto it = c.expect.find(reg.kind);
      if (it != c.expect.end() && it->second != reg.verdict && o.mismatch.empty()) {
        o.mismatch = regime_name(reg.kind) + " regime: " + empirical_verdict_name(reg.verdict) + ", expected " +
                     empirical_verdict_name(it->second);
      }
    }
    for (const auto& [kind, v] : c.expect) {
      const bool present = std::any_of(r.regimes.begin(), r.regimes.end(), [&](const RegimeResult& x) { return x.kind == kind; });
      if (!present && o.mismatch.empty()) o.mismatch = "no " + regime_name(kind) + " regime configured";
    }
    o.passed = o.mismatch.empty();
  }
  rep["config"] = cfg;
  rep["passed"] = o.passed;
  rep["mismatch"] = o.mismatch;
  o.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return o;
}

}  // namespace bvlab
