#pragma once

// The acting, local-boundedness and boundedness tables as data: row loading,
// guarded lookup, and an internal consistency check over the implication order.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "bvlab/conditions.hpp"
#include "bvlab/errors.hpp"
#include "bvlab/space_kind.hpp"

#ifndef BVLAB_DATA_DIR
#define BVLAB_DATA_DIR "data"
#endif

namespace bvlab {

enum class RuleTable { Acting, LocalBounded, Bounded };

inline std::string table_name(RuleTable t) {
  switch (t) {
    case RuleTable::Acting: return "acting";
    case RuleTable::LocalBounded: return "local_bounded";
    case RuleTable::Bounded: return "bounded";
  }
  return "?";
}

inline RuleTable parse_table(const std::string& s) {
  if (s == "acting") return RuleTable::Acting;
  if (s == "local_bounded" || s == "local-bounded" || s == "localbounded") return RuleTable::LocalBounded;
  if (s == "bounded") return RuleTable::Bounded;
  throw ConfigError("unknown table '" + s + "' (acting, local_bounded, bounded)");
}

/// Variable bindings for a row: p and q as they appear in the row's spaces.
using Bindings = std::map<std::string, double>;

namespace detail {

// A space pattern: "bvp:p", "bvp:1", "c0", ...
struct SpacePattern {
  SeqSpaceTag tag;
  std::optional<double> fixed;
  std::string var;

  static SpacePattern parse(const std::string& text) {
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    auto tag = SpaceKind::parse_tag(head);
    if (!tag) throw ConfigError("unknown space pattern '" + text + "'");
    SpacePattern sp{*tag, std::nullopt, {}};
    const bool param = *tag == SeqSpaceTag::Lp || *tag == SeqSpaceTag::Bvp;
    if (param != (colon != std::string::npos)) throw ConfigError("bad parameter in space pattern '" + text + "'");
    if (param) {
      const std::string rest = text.substr(colon + 1);
      if (!rest.empty() && std::isalpha(static_cast<unsigned char>(rest[0]))) {
        sp.var = rest;
      } else {
        try {
          sp.fixed = std::stod(rest);
        } catch (const std::exception&) {
          throw ConfigError("bad parameter in space pattern '" + text + "'");
        }
      }
    }
    return sp;
  }

  bool bind(const SpaceKind& s, Bindings& b) const {
    if (s.tag != tag) return false;
    if (fixed) return s.p == *fixed;
    if (var.empty()) return true;
    auto it = b.find(var);
    if (it != b.end()) return it->second == s.p;
    b[var] = s.p;
    return true;
  }
};

inline double term_value(const std::string& t, const Bindings& b) {
  if (t.empty()) throw ConfigError("empty term in guard or exponent");
  if (std::isalpha(static_cast<unsigned char>(t[0]))) {
    auto it = b.find(t);
    if (it == b.end()) throw ConfigError("unbound variable '" + t + "'");
    return it->second;
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != t.size()) throw ConfigError("bad term '" + t + "'");
  return v;
}

// "a/b" or a single term.
inline double eval_expr(const std::string& e, const Bindings& b) {
  const auto slash = e.find('/');
  if (slash == std::string::npos) return term_value(e, b);
  return term_value(e.substr(0, slash), b) / term_value(e.substr(slash + 1), b);
}

// Comma-separated chains such as "1<=q<p". Empty means always.
inline bool eval_guard(const std::string& guard, const Bindings& b) {
  std::string clean;
  for (char c : guard) {
    if (!std::isspace(static_cast<unsigned char>(c))) clean += c;
  }
  std::stringstream clauses(clean);
  std::string clause;
  while (std::getline(clauses, clause, ',')) {
    std::vector<std::string> terms;
    std::vector<bool> strict;
    std::string cur;
    for (std::size_t i = 0; i < clause.size(); ++i) {
      if (clause[i] == '<') {
        terms.push_back(cur);
        cur.clear();
        const bool le = i + 1 < clause.size() && clause[i + 1] == '=';
        strict.push_back(!le);
        if (le) ++i;
      } else {
        cur += clause[i];
      }
    }
    terms.push_back(cur);
    if (terms.size() < 2) throw ConfigError("guard clause '" + clause + "' has no comparison");
    for (std::size_t i = 0; i + 1 < terms.size(); ++i) {
      const double l = term_value(terms[i], b);
      const double r = term_value(terms[i + 1], b);
      if (strict[i] ? !(l < r) : !(l <= r)) return false;
    }
  }
  return true;
}

}  // namespace detail

struct RuleRow {
  RuleTable table;
  int row = 0;               // position in its table, 0 for derived rows
  bool derived = false;      // a consequence stated outside the tables
  std::string from;
  std::string to;
  std::string guard;
  bool requires_complete = false;
  GenTag tag;
  std::string exponent;      // expression in p, q; empty for exponent-free tags
  std::string anchor;
  std::string counterexample;
  std::string overlay;       // extra requirement, e.g. "f(0)=0"

  std::string label() const {
    return table_name(table) + (derived ? "/derived" : "/" + std::to_string(row)) + " " + from + " -> " + to +
           (guard.empty() ? "" : " [" + guard + "]");
  }

  /// Bindings if (f, t) matches the spaces and guard.
  std::optional<Bindings> match(const SpaceKind& f, const SpaceKind& t) const {
    Bindings b;
    if (!detail::SpacePattern::parse(from).bind(f, b)) return std::nullopt;
    if (!detail::SpacePattern::parse(to).bind(t, b)) return std::nullopt;
    if (!detail::eval_guard(guard, b)) return std::nullopt;
    return b;
  }

  GenCondition condition(const Bindings& b) const {
    if (exponent.empty()) return GenCondition::make(tag);
    return GenCondition::make(tag, detail::eval_expr(exponent, b));
  }
};

struct RuleMatch {
  std::optional<RuleRow> row;
  std::optional<GenCondition> condition;

  bool covered() const { return condition.has_value(); }
  std::string to_string() const { return condition ? condition->to_string() : "NotCovered"; }
};

class Rulebook {
 public:
  std::vector<RuleRow> rows;

  static Rulebook from_json(const nlohmann::json& j) {
    Rulebook rb;
    if (!j.contains("rows") || !j["rows"].is_array()) throw ConfigError("rulebook needs a 'rows' array");
    for (const auto& r : j["rows"]) {
      RuleRow row;
      try {
        row.table = parse_table(r.at("table").get<std::string>());
        row.row = r.value("row", 0);
        row.derived = r.value("derived", false);
        row.from = r.at("from").get<std::string>();
        row.to = r.at("to").get<std::string>();
        row.guard = r.value("guard", "");
        row.requires_complete = r.value("complete", false);
        const auto& c = r.at("condition");
        row.tag = parse_gen_tag(c.at("tag").get<std::string>());
        if (c.contains("exponent")) row.exponent = c["exponent"].get<std::string>();
        row.anchor = r.value("anchor", "");
        row.counterexample = r.value("counterexample", "");
        row.overlay = r.value("overlay", "");
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed rulebook row: ") + e.what());
      }
      detail::SpacePattern::parse(row.from);
      detail::SpacePattern::parse(row.to);
      if (has_exponent(row.tag) == row.exponent.empty()) {
        throw ConfigError("row " + row.label() + ": exponent presence does not match " + tag_name(row.tag));
      }
      if (row.requires_complete && row.counterexample.empty()) {
        throw ConfigError("row " + row.label() + " requires completeness but names no counterexample");
      }
      rb.rows.push_back(std::move(row));
    }
    return rb;
  }

  static Rulebook load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open rulebook " + path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("rulebook " + path + ": " + e.what());
    }
    return from_json(j);
  }

  static std::string default_path() {
    if (const char* dir = std::getenv("BVLAB_DATA_DIR")) return std::string(dir) + "/rulebook.json";
    return std::string(BVLAB_DATA_DIR) + "/rulebook.json";
  }

  /// The bundled rulebook, loaded once.
  static const Rulebook& bundled() {
    static const Rulebook rb = load(default_path());
    return rb;
  }

  std::size_t count(RuleTable t, bool include_derived = false) const {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.table == t && (include_derived || !r.derived);
    return n;
  }

  /// The unique row of table t matching (from, to). NotCovered when none does.
  /// Completeness rows asked about with complete = false raise CompletenessRequired.
  RuleMatch lookup(RuleTable t, const SpaceKind& from, const SpaceKind& to, bool complete) const {
    RuleMatch m;
    for (const auto& r : rows) {
      if (r.table != t) continue;
      auto b = r.match(from, to);
      if (!b) continue;
      if (m.row) throw StructuralError("rows " + m.row->label() + " and " + r.label() + " overlap");
      m.row = r;
      m.condition = r.condition(*b);
    }
    if (m.row && m.row->requires_complete && !complete) {
      throw CompletenessRequired("row " + m.row->label() + " characterizes complete spaces only; see " +
                                     m.row->counterexample,
                                 m.row->counterexample);
    }
    return m;
  }
};

inline RuleMatch acting_condition(const SpaceKind& from, const SpaceKind& to, bool complete,
                                  const Rulebook& rb = Rulebook::bundled()) {
  return rb.lookup(RuleTable::Acting, from, to, complete);
}

inline RuleMatch local_boundedness_condition(const SpaceKind& from, const SpaceKind& to, bool complete,
                                             const Rulebook& rb = Rulebook::bundled()) {
  return rb.lookup(RuleTable::LocalBounded, from, to, complete);
}

inline RuleMatch boundedness_condition(const SpaceKind& from, const SpaceKind& to, bool complete,
                                       const Rulebook& rb = Rulebook::bundled()) {
  return rb.lookup(RuleTable::Bounded, from, to, complete);
}

// ---------------------------------------------------------------------------
// Consistency

struct ConsistencyReport {
  std::size_t triples = 0;      // (from, to, guard) present in all three tables
  std::size_t instances = 0;    // grid points checked
  std::vector<std::string> violations;

  bool passed() const { return violations.empty() && triples > 0; }
};

/// For every (from, to, guard) present in all three tables and every (p, q) on
/// a grid satisfying the guard: bounded => local_bounded => acting.
inline ConsistencyReport consistency_check(const Rulebook& rb = Rulebook::bundled()) {
  ConsistencyReport rep;
  static const double grid[] = {1.0, 1.25, 1.5, 2.0, 3.0, 4.5};
  for (const auto& b : rb.rows) {
    if (b.table != RuleTable::Bounded || b.derived) continue;
    const RuleRow* lb = nullptr;
    const RuleRow* ac = nullptr;
    for (const auto& r : rb.rows) {
      if (r.derived || r.from != b.from || r.to != b.to || r.guard != b.guard) continue;
      if (r.table == RuleTable::LocalBounded) lb = &r;
      if (r.table == RuleTable::Acting) ac = &r;
    }
    if (!lb || !ac) continue;
    ++rep.triples;
    for (double p : grid) {
      for (double q : grid) {
        Bindings bind{{"p", p}, {"q", q}};
        if (!detail::eval_guard(b.guard, bind)) continue;
        ++rep.instances;
        const GenCondition cb = b.condition(bind);
        const GenCondition cl = lb->condition(bind);
        const GenCondition ca = ac->condition(bind);
        char at[64];
        std::snprintf(at, sizeof at, " at p=%g q=%g", p, q);
        if (!implies(cb, cl)) {
          rep.violations.push_back(b.label() + ": " + cb.to_string() + " does not imply " + cl.to_string() +
                                   " (" + lb->label() + ")" + at);
        }
        if (!implies(cl, ca)) {
          rep.violations.push_back(lb->label() + ": " + cl.to_string() + " does not imply " + ca.to_string() +
                                   " (" + ac->label() + ")" + at);
        }
      }
    }
  }
  return rep;
}

}  // namespace bvlab
