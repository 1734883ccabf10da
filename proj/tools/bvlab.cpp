// bvlab: catalog listing, experiment runs, rulebook queries.
//
// Exit codes: 0 all pass, 1 expectation mismatch, 2 usage or configuration error.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "bvlab.hpp"

namespace {

using namespace bvlab;

int cmd_list(bool as_json, const std::string& corpus) {
  const auto experiments = load_experiments_file(corpus);
  json j;
  j["sequences"] = json::array();
  for (const auto& s : sequence_catalog()) {
    j["sequences"].push_back({{"id", s.id}, {"params", s.params}, {"description", s.description}});
  }
  j["generators"] = json::array();
  for (const auto& g : generator_catalog()) {
    j["generators"].push_back({{"id", g.id}, {"space", g.space}, {"params", g.params}, {"description", g.description}});
  }
  j["comparators"] = json::array();
  for (const auto& c : comparator_registry()) {
    j["comparators"].push_back({{"id", c.id}, {"kind", comparator_kind_name(c.kind)}, {"formula", c.formula}});
  }
  j["experiments"] = json::array();
  for (const auto& e : experiments) {
    j["experiments"].push_back({{"id", e.id}, {"kind", kind_name(e.kind)}, {"anchor", e.anchor}});
  }
  for (auto& [section, items] : j.items()) {
    std::sort(items.begin(), items.end(), [](const json& a, const json& b) { return a["id"] < b["id"]; });
  }
  if (as_json) {
    std::cout << j.dump(1) << "\n";
    return 0;
  }
  for (const char* section : {"sequences", "generators", "comparators", "experiments"}) {
    std::cout << section << ":\n";
    for (const auto& item : j[section]) {
      std::string extra;
      if (item.contains("description")) extra = item["description"].get<std::string>();
      if (item.contains("formula")) extra = item["formula"].get<std::string>();
      if (item.contains("anchor")) extra = "[" + item["kind"].get<std::string>() + "] " + item["anchor"].get<std::string>();
      std::printf("  %-36s %s\n", item["id"].get<std::string>().c_str(), extra.c_str());
    }
  }
  return 0;
}

struct RunArgs {
  std::vector<std::string> ids;
  long long horizon = 0;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "json";
  unsigned jobs = 1;
  bool quiet = false;
};

int cmd_run(const RunArgs& a, const std::string& corpus) {
  if (a.horizon != 0 && a.horizon < 2) {
    std::cerr << "error: horizon must be at least 2\n";
    return 2;
  }
  const ReportFormat fmt = parse_format(a.format);
  const auto all = load_experiments_file(corpus);
  std::vector<const Experiment*> chosen;
  const bool everything = a.ids.empty() || (a.ids.size() == 1 && a.ids[0] == "all");
  if (everything) {
    for (const auto& e : all) chosen.push_back(&e);
  } else {
    for (const auto& e : all) {
      if (std::find(a.ids.begin(), a.ids.end(), e.id) != a.ids.end()) chosen.push_back(&e);
    }
    for (const auto& id : a.ids) {
      if (std::none_of(all.begin(), all.end(), [&](const Experiment& e) { return e.id == id; })) {
        std::cerr << "error: unknown experiment '" << id << "'\n";
        return 2;
      }
    }
  }

  RunOptions opt;
  if (a.horizon != 0) opt.horizon = static_cast<Index>(a.horizon);
  opt.seed = a.seed;

  std::vector<std::optional<Outcome>> results(chosen.size());
  std::vector<std::string> errors(chosen.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < chosen.size();) {
      try {
        results[i] = run_experiment(*chosen[i], opt);
      } catch (const std::exception& ex) {
        errors[i] = ex.what();
      }
    }
  };
  unsigned jobs = a.jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : a.jobs;
  jobs = std::min<unsigned>(jobs, std::max<std::size_t>(1, chosen.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Assembly in id order, independent of completion order.
  int status = 0;
  std::vector<std::string> failures;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    if (!errors[i].empty()) {
      std::cerr << "error: " << chosen[i]->id << ": " << errors[i] << "\n";
      status = 2;
      continue;
    }
    const Outcome& o = *results[i];
    if (!a.out.empty()) emit_report(o, a.out, fmt);
    if (!a.quiet) std::printf("%-36s %s\n", o.id.c_str(), o.passed ? "PASS" : "FAIL");
    if (!o.passed) failures.push_back(o.id + ": " + o.mismatch);
  }
  if (!failures.empty()) {
    std::printf("\n%zu expectation mismatch(es):\n", failures.size());
    for (const auto& f : failures) std::printf("  %s\n", f.c_str());
    if (status == 0) status = 1;
  }
  return status;
}

int cmd_rulebook_check() {
  const Rulebook& rb = Rulebook::bundled();
  const auto rep = consistency_check(rb);
  std::printf("rows: acting %zu, local_bounded %zu, bounded %zu (+%zu derived)\n", rb.count(RuleTable::Acting),
              rb.count(RuleTable::LocalBounded), rb.count(RuleTable::Bounded),
              rb.rows.size() - rb.count(RuleTable::Acting) - rb.count(RuleTable::LocalBounded) -
                  rb.count(RuleTable::Bounded));
  std::printf("triples %zu, instances %zu, acyclic order %s\n", rep.triples, rep.instances,
              implication_graph_acyclic() ? "yes" : "no");
  for (const auto& v : rep.violations) std::printf("violation: %s\n", v.c_str());
  const bool ok = rep.passed() && implication_graph_acyclic();
  std::printf("%s\n", ok ? "consistent" : "INCONSISTENT");
  return ok ? 0 : 1;
}

int cmd_rulebook_lookup(const std::string& table, const std::string& from, const std::string& to, bool complete) {
  const RuleTable t = parse_table(table);
  try {
    const RuleMatch m = Rulebook::bundled().lookup(t, SpaceKind::parse(from), SpaceKind::parse(to), complete);
    std::printf("%s\n", m.to_string().c_str());
    if (m.row) {
      std::printf("row: %s\n", m.row->label().c_str());
      std::printf("anchor: %s\n", m.row->anchor.c_str());
      if (!m.row->overlay.empty()) std::printf("also requires: %s\n", m.row->overlay.c_str());
    }
  } catch (const CompletenessRequired& e) {
    std::printf("CompletenessRequired: %s\ncounterexample: %s\n", e.what(), e.counterexample().c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bvlab: composition operators on sequence spaces"};
  app.require_subcommand(1);
  std::string corpus = default_corpus_path();
  app.add_option("--corpus", corpus, "experiment corpus JSON");

  bool list_json = false;
  auto* list = app.add_subcommand("list", "list sequences, generators, comparators and experiments");
  list->add_flag("--json", list_json, "JSON output");

  RunArgs ra;
  auto* run = app.add_subcommand("run", "run experiments and check their expectations");
  run->add_option("--ids", ra.ids, "experiment ids, or 'all'")->delimiter(',');
  run->add_option("--horizon", ra.horizon, "override acting horizons (>= 2)");
  run->add_option("--seed", ra.seed, "sampling seed");
  run->add_option("--out", ra.out, "report directory");
  run->add_option("--format", ra.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  run->add_option("--jobs", ra.jobs, "worker threads, 0 = auto");
  run->add_flag("--quiet", ra.quiet, "print mismatches only");

  auto* rulebook = app.add_subcommand("rulebook", "query or check the condition tables");
  rulebook->require_subcommand(1);
  auto* check = rulebook->add_subcommand("check", "consistency check");
  std::string table = "acting", from, to;
  bool complete = false;
  auto* lookup = rulebook->add_subcommand("lookup", "look up the condition for a pair of spaces");
  lookup->add_option("--table", table, "acting, local_bounded or bounded");
  lookup->add_option("--from", from, "e.g. bvp:1")->required();
  lookup->add_option("--to", to, "e.g. bvp:2")->required();
  lookup->add_flag("--complete", complete, "E is complete");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*list) return cmd_list(list_json, corpus);
    if (*run) return cmd_run(ra, corpus);
    if (*check) return cmd_rulebook_check();
    if (*lookup) return cmd_rulebook_lookup(table, from, to, complete);
  } catch (const bvlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const bvlab::LookupError& e) {
    std::cerr << "lookup error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
