#pragma once

// Generator conditions appearing in the acting and boundedness tables, and
// the explicitly enumerated implication order between them.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bvlab/errors.hpp"

namespace bvlab {

enum class GenTag {
  ZeroMap,
  ConstantMap,
  LocallyConstantAtZero,
  PowerBoundAtZero,
  HolderCompact,
  HolderStrg,
  HolderBounded,
  BoundedOnE,
  BoundedOnCompact,
  ContinuousOnE,
  LocallyBounded,
  LocallyBoundedAndContinuous,
  BoundedAndContinuous,
  LocallyBoundedPlusPowerBound,
};

inline const std::vector<std::pair<GenTag, std::string>>& gen_tag_names() {
  static const std::vector<std::pair<GenTag, std::string>> names = {
      {GenTag::ZeroMap, "ZeroMap"},
      {GenTag::ConstantMap, "ConstantMap"},
      {GenTag::LocallyConstantAtZero, "LocallyConstantAtZero"},
      {GenTag::PowerBoundAtZero, "PowerBoundAtZero"},
      {GenTag::HolderCompact, "HolderCompact"},
      {GenTag::HolderStrg, "HolderStrg"},
      {GenTag::HolderBounded, "HolderBounded"},
      {GenTag::BoundedOnE, "BoundedOnE"},
      {GenTag::BoundedOnCompact, "BoundedOnCompact"},
      {GenTag::ContinuousOnE, "ContinuousOnE"},
      {GenTag::LocallyBounded, "LocallyBounded"},
      {GenTag::LocallyBoundedAndContinuous, "LocallyBoundedAndContinuous"},
      {GenTag::BoundedAndContinuous, "BoundedAndContinuous"},
      {GenTag::LocallyBoundedPlusPowerBound, "LocallyBoundedPlusPowerBound"},
  };
  return names;
}

inline std::string tag_name(GenTag t) {
  for (const auto& [tag, name] : gen_tag_names()) {
    if (tag == t) return name;
  }
  return "?";
}

inline GenTag parse_gen_tag(const std::string& s) {
  for (const auto& [tag, name] : gen_tag_names()) {
    if (name == s) return tag;
  }
  throw ConfigError("unknown generator condition '" + s + "'");
}

inline bool has_exponent(GenTag t) {
  return t == GenTag::PowerBoundAtZero || t == GenTag::HolderCompact || t == GenTag::HolderStrg ||
         t == GenTag::HolderBounded || t == GenTag::LocallyBoundedPlusPowerBound;
}

/// Hoelder exponents live in (0, 1]; the power-bound exponent p/q may exceed 1.
inline bool exponent_may_exceed_one(GenTag t) {
  return t == GenTag::PowerBoundAtZero || t == GenTag::LocallyBoundedPlusPowerBound;
}

struct GenCondition {
  GenTag tag = GenTag::ConstantMap;
  std::optional<double> exponent;

  static GenCondition make(GenTag t, std::optional<double> e = std::nullopt) {
    if (has_exponent(t) != e.has_value()) {
      throw StructuralError(tag_name(t) + (e ? " takes no exponent" : " needs an exponent"));
    }
    if (e) {
      if (!(*e > 0.0) || std::isinf(*e)) throw ParameterError(tag_name(t) + " exponent must be positive");
      if (*e > 1.0 && !exponent_may_exceed_one(t)) {
        throw ParameterError(tag_name(t) + " exponent must lie in (0, 1]");
      }
    }
    return {t, e};
  }

  std::string to_string() const {
    if (!exponent) return tag_name(tag);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", *exponent);
    return tag_name(tag) + "(" + buf + ")";
  }

  friend bool operator==(const GenCondition& a, const GenCondition& b) {
    return a.tag == b.tag && a.exponent == b.exponent;
  }
};

// ---------------------------------------------------------------------------
// Implication order

enum class EdgeMode {
  Plain,        // neither side carries an exponent, or the target's is fixed by the source
  SameExponent, // T1(a) => T2(a)
  AnyExponent,  // T1 => T2(a) for every a
};

struct ImplicationEdge {
  GenTag from;
  GenTag to;
  EdgeMode mode;
  const char* reason;
};

/// Every implication the checker may use. Exponent weakening
/// T(a) => T(b) for b <= a is the only other rule, and it applies to every
/// exponent-carrying tag.
inline const std::vector<ImplicationEdge>& implication_edges() {
  using G = GenTag;
  static const std::vector<ImplicationEdge> edges = {
      {G::ZeroMap, G::ConstantMap, EdgeMode::Plain, "the zero map is constant"},
      {G::ConstantMap, G::LocallyConstantAtZero, EdgeMode::Plain, "constant everywhere"},
      {G::ConstantMap, G::HolderStrg, EdgeMode::AnyExponent, "zero increments"},
      {G::ConstantMap, G::BoundedAndContinuous, EdgeMode::Plain, "constant maps are bounded and continuous"},
      {G::ConstantMap, G::LocallyBoundedPlusPowerBound, EdgeMode::AnyExponent, "zero increments"},
      {G::LocallyConstantAtZero, G::PowerBoundAtZero, EdgeMode::AnyExponent, "f(u) - f(0) = 0 near 0"},
      {G::HolderStrg, G::HolderBounded, EdgeMode::SameExponent, "chaining over a ball"},
      {G::HolderBounded, G::HolderCompact, EdgeMode::SameExponent, "compact sets are bounded"},
      {G::HolderBounded, G::LocallyBoundedAndContinuous, EdgeMode::Plain, "Hoelder on balls"},
      {G::HolderBounded, G::LocallyBoundedPlusPowerBound, EdgeMode::SameExponent,
       "(|u|+|w|)^a <= |u|^a + |w|^a for a <= 1"},
      {G::HolderCompact, G::ContinuousOnE, EdgeMode::Plain, "convergent sequences with their limit are compact"},
      {G::HolderCompact, G::BoundedOnCompact, EdgeMode::Plain, "Hoelder on a compact set bounds f there"},
      {G::BoundedAndContinuous, G::BoundedOnE, EdgeMode::Plain, "by definition"},
      {G::BoundedAndContinuous, G::LocallyBoundedAndContinuous, EdgeMode::Plain, "bounded implies locally bounded"},
      {G::BoundedOnE, G::LocallyBounded, EdgeMode::Plain, "by definition"},
      {G::LocallyBoundedAndContinuous, G::LocallyBounded, EdgeMode::Plain, "by definition"},
      {G::LocallyBoundedAndContinuous, G::ContinuousOnE, EdgeMode::Plain, "by definition"},
      {G::ContinuousOnE, G::BoundedOnCompact, EdgeMode::Plain, "continuous images of compact sets are bounded"},
      {G::LocallyBounded, G::BoundedOnCompact, EdgeMode::Plain, "compact sets are bounded"},
      {G::LocallyBoundedPlusPowerBound, G::LocallyBounded, EdgeMode::Plain, "by definition"},
      {G::LocallyBoundedPlusPowerBound, G::PowerBoundAtZero, EdgeMode::SameExponent, "take w = 0"},
  };
  return edges;
}

namespace detail {

constexpr double kAnyExponent = std::numeric_limits<double>::infinity();

// A reachable node: tag plus the largest exponent known to hold (inf = all).
struct Reached {
  GenTag tag;
  double exponent;  // NaN for exponent-free tags
  bool operator<(const Reached& o) const {
    if (tag != o.tag) return tag < o.tag;
    return exponent < o.exponent;
  }
};

inline std::vector<Reached> forward_closure(GenTag start, double start_exp) {
  std::vector<Reached> out;
  std::set<std::pair<int, double>> seen;
  std::deque<Reached> work{{start, has_exponent(start) ? start_exp : std::nan("")}};
  while (!work.empty()) {
    Reached r = work.front();
    work.pop_front();
    const double key = std::isnan(r.exponent) ? -1.0 : r.exponent;
    if (!seen.insert({static_cast<int>(r.tag), key}).second) continue;
    out.push_back(r);
    for (const auto& e : implication_edges()) {
      if (e.from != r.tag) continue;
      double next = std::nan("");
      if (has_exponent(e.to)) {
        next = e.mode == EdgeMode::AnyExponent ? kAnyExponent : r.exponent;
      }
      work.push_back({e.to, next});
    }
  }
  return out;
}

}  // namespace detail

/// Does a imply b under the enumerated order (reflexive, transitive, with
/// exponent weakening)?
inline bool implies(const GenCondition& a, const GenCondition& b) {
  const double ea = a.exponent.value_or(std::nan(""));
  for (const auto& r : detail::forward_closure(a.tag, ea)) {
    if (r.tag != b.tag) continue;
    if (!has_exponent(b.tag)) return true;
    if (*b.exponent <= r.exponent) return true;
  }
  return false;
}

/// Detects a cycle among distinct tags in the edge list (weakening excluded).
inline bool implication_graph_acyclic() {
  const auto& names = gen_tag_names();
  for (const auto& [tag, name] : names) {
    // a tag reachable from any of its successors means a cycle
    for (const auto& e : implication_edges()) {
      if (e.from != tag) continue;
      for (const auto& r : detail::forward_closure(e.to, 1.0)) {
        if (r.tag == tag) return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Generator facts

/// A declared property of a generator. A satisfied fact holds for every
/// exponent up to hi; a violated fact for every exponent above lo (from lo
/// when lo_closed). Exponent-free tags ignore both.
struct GenFact {
  GenTag tag;
  bool satisfied;
  double lo = 0.0;
  double hi = detail::kAnyExponent;
  bool lo_closed = false;
  std::string source;

  bool covers(double e) const { return (lo_closed ? e >= lo : e > lo) && e <= hi; }
};

enum class Decision { Satisfied, Violated, Unknown };

inline std::string decision_name(Decision d) {
  switch (d) {
    case Decision::Satisfied: return "satisfied";
    case Decision::Violated: return "violated";
    case Decision::Unknown: return "unknown";
  }
  return "?";
}

/// Decides cond from declared facts: satisfied if some satisfied fact implies
/// it; violated if it implies some violated fact. Satisfaction is downward
/// closed in the exponent, violation upward closed.
inline Decision decide(const GenCondition& cond, const std::vector<GenFact>& facts) {
  bool sat = false, vio = false;
  for (const auto& f : facts) {
    if (f.satisfied) {
      const double e = has_exponent(f.tag) ? f.hi : std::nan("");
      GenCondition start{f.tag, has_exponent(f.tag) ? std::optional<double>(e) : std::nullopt};
      if (implies(start, cond)) sat = true;
    } else {
      for (const auto& r :
           detail::forward_closure(cond.tag, cond.exponent.value_or(std::nan("")))) {
        if (r.tag != f.tag) continue;
        // cond => V(b) for all b <= r.exponent; some such b must be violated
        if (!has_exponent(f.tag) || (f.lo_closed ? r.exponent >= f.lo : r.exponent > f.lo)) vio = true;
      }
    }
  }
  if (sat && vio) throw StructuralError("generator facts contradict each other on " + cond.to_string());
  if (sat) return Decision::Satisfied;
  if (vio) return Decision::Violated;
  return Decision::Unknown;
}

}  // namespace bvlab
