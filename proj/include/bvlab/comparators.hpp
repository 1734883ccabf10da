#pragma once

// Registry of closed-form comparators. A finite trace never proves
// divergence on its own; a verdict is always relative to one of these.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bvlab/errors.hpp"
#include "bvlab/numeric.hpp"
#include "bvlab/sequence.hpp"

namespace bvlab {

enum class ComparatorKind {
  DivergentSeries,   // sum of term(n) diverges; used as a lower bound
  ConvergentSeries,  // sum of term(n) has a known finite upper bound
  Growth,            // norm x(n) >= term(n), term unbounded
  AnchorGrowth,      // as Growth, but only at designated anchor indices
  Floor,             // norm x(n) >= c > 0
  Oscillation,       // two distinct exact values, each recurring
  DecayEnvelope,     // norm x(n) <= c n^-e, e > 0
  UniformBound,      // norm x(n) <= M
};

inline std::string comparator_kind_name(ComparatorKind k) {
  switch (k) {
    case ComparatorKind::DivergentSeries: return "divergent_series";
    case ComparatorKind::ConvergentSeries: return "convergent_series";
    case ComparatorKind::Growth: return "growth";
    case ComparatorKind::AnchorGrowth: return "anchor_growth";
    case ComparatorKind::Floor: return "floor";
    case ComparatorKind::Oscillation: return "oscillation";
    case ComparatorKind::DecayEnvelope: return "decay_envelope";
    case ComparatorKind::UniformBound: return "uniform_bound";
  }
  return "?";
}

struct ComparatorInfo {
  std::string id;
  ComparatorKind kind;
  Index onset;                   // default onset; "onset" parameter overrides
  std::string formula;
  std::string justification;
  std::vector<std::string> params;
};

inline const std::vector<ComparatorInfo>& comparator_registry() {
  static const std::vector<ComparatorInfo> reg = {
      {"anchor_growth", ComparatorKind::AnchorGrowth, 1, "c*j^e at x(idx(j))",
       "e > 0 makes the anchor values unbounded", {"c", "e"}},
      {"constant_series", ComparatorKind::DivergentSeries, 1, "c",
       "a constant positive term has an unbounded partial sum", {"c"}},
      {"decay_envelope", ComparatorKind::DecayEnvelope, 1, "c*n^-e",
       "c*n^-e -> 0 for e > 0", {"c", "e"}},
      {"floor", ComparatorKind::Floor, 1, "c", "terms bounded below by c > 0 do not tend to 0", {"c"}},
      {"harmonic", ComparatorKind::DivergentSeries, 1, "scale/n", "the harmonic series diverges", {"scale"}},
      {"oscillation", ComparatorKind::Oscillation, 1, "x(n) in {a, b}, a != b, alternately",
       "two constant subsequences with different values rule out a limit", {"min_repeats"}},
      {"p_series", ComparatorKind::ConvergentSeries, 1, "scale*n^-s",
       "sum n^-s <= sum_{k<=M} k^-s + M^(1-s)/(s-1) for s > 1", {"s", "scale"}},
      {"power_growth", ComparatorKind::Growth, 1, "c*n^e", "c*n^e is unbounded for e > 0", {"c", "e"}},
      {"ratio_sq_shift", ComparatorKind::DivergentSeries, 1, "(n+2)^2/(n+1)^2",
       "terms exceed 1, so the partial sums are unbounded", {}},
      {"shifted_p_series", ComparatorKind::ConvergentSeries, 1, "scale*(n+1)^-s",
       "sum (n+1)^-s <= sum_{2<=k<=M} k^-s + M^(1-s)/(s-1) for s > 1", {"s", "scale"}},
      {"sqrt2_over_n", ComparatorKind::DivergentSeries, 15, "sqrt(2)/n",
       "a positive multiple of the harmonic series diverges", {}},
      {"uniform_bound", ComparatorKind::UniformBound, 1, "M", "a uniform bound", {"M"}},
      {"zero", ComparatorKind::ConvergentSeries, 1, "0", "the zero series sums to 0", {}},
  };
  return reg;
}

inline const ComparatorInfo& comparator_info(const std::string& id) {
  const auto& reg = comparator_registry();
  auto it = std::find_if(reg.begin(), reg.end(), [&](const ComparatorInfo& c) { return c.id == id; });
  if (it == reg.end()) throw LookupError("unknown comparator '" + id + "'");
  return *it;
}

/// An instantiated comparator.
struct Comparator {
  ComparatorInfo info;
  std::map<std::string, double> params;
  Index onset = 1;
  std::function<double(Index)> term;  // series/growth/envelope term; unused for Oscillation
  double constant = 0.0;              // Floor's c, UniformBound's M
  std::vector<Index> anchors;         // AnchorGrowth: the indices idx(j), j = 1, 2, ...

  /// Upper bound for sum_{n >= from} term(n); ConvergentSeries only.
  std::function<double(Index)> tail_bound;

  const std::string& id() const { return info.id; }
};

namespace detail {

inline double get_param(const std::map<std::string, double>& params, const std::string& id,
                        const std::string& key, std::optional<double> fallback = std::nullopt) {
  auto it = params.find(key);
  if (it != params.end()) return it->second;
  if (fallback) return *fallback;
  throw ConfigError("comparator '" + id + "' needs parameter '" + key + "'");
}

// sum_{k >= from} k^-s for s > 1: exact head up to M, integral bound beyond.
inline double zeta_tail_bound(double s, Index from) {
  const Index m = std::max<Index>(from, 4096);
  CompensatedSum acc;
  for (Index k = from; k <= m; ++k) acc += power(static_cast<double>(k), -s);
  acc += power(static_cast<double>(m), 1.0 - s) / (s - 1.0);
  return acc.value();
}

}  // namespace detail

inline Comparator make_comparator(const std::string& id, const std::map<std::string, double>& params = {}) {
  Comparator c;
  c.info = comparator_info(id);
  c.params = params;
  for (const auto& [k, v] : params) {
    if (k == "onset") continue;
    if (std::find(c.info.params.begin(), c.info.params.end(), k) == c.info.params.end()) {
      throw ConfigError("comparator '" + id + "' has no parameter '" + k + "'");
    }
  }
  const double onset = detail::get_param(params, id, "onset", static_cast<double>(c.info.onset));
  if (!(onset >= 1.0) || onset != std::floor(onset)) throw ConfigError("comparator onset must be a positive integer");
  c.onset = static_cast<Index>(onset);
  auto P = [&](const std::string& k, std::optional<double> fb = std::nullopt) {
    return detail::get_param(params, id, k, fb);
  };

  if (id == "harmonic") {
    const double scale = P("scale", 1.0);
    if (!(scale > 0.0)) throw ConfigError("harmonic needs scale > 0");
    c.term = [scale](Index n) { return scale / static_cast<double>(n); };
  } else if (id == "sqrt2_over_n") {
    c.term = [](Index n) { return std::sqrt(2.0) / static_cast<double>(n); };
  } else if (id == "ratio_sq_shift") {
    c.term = [](Index n) {
      const double a = static_cast<double>(n) + 2.0;
      const double b = static_cast<double>(n) + 1.0;
      return (a * a) / (b * b);
    };
  } else if (id == "constant_series") {
    const double v = P("c");
    if (!(v > 0.0)) throw ConfigError("constant_series needs c > 0");
    c.term = [v](Index) { return v; };
  } else if (id == "p_series" || id == "shifted_p_series") {
    const double s = P("s");
    const double scale = P("scale", 1.0);
    if (!(s > 1.0)) throw ConfigError(id + " needs s > 1");
    if (!(scale >= 0.0)) throw ConfigError(id + " needs scale >= 0");
    const double shift = id == "p_series" ? 0.0 : 1.0;
    c.term = [s, scale, shift](Index n) { return scale * power(static_cast<double>(n) + shift, -s); };
    c.tail_bound = [s, scale, shift](Index from) {
      return scale * detail::zeta_tail_bound(s, from + static_cast<Index>(shift));
    };
  } else if (id == "zero") {
    c.term = [](Index) { return 0.0; };
    c.tail_bound = [](Index) { return 0.0; };
  } else if (id == "power_growth" || id == "anchor_growth") {
    const double k = P("c");
    const double e = P("e");
    if (!(k > 0.0) || !(e > 0.0)) throw ConfigError(id + " needs c > 0 and e > 0");
    c.term = [k, e](Index n) { return k * power(static_cast<double>(n), e); };
  } else if (id == "floor") {
    c.constant = P("c");
    if (!(c.constant > 0.0)) throw ConfigError("floor needs c > 0");
  } else if (id == "decay_envelope") {
    const double k = P("c");
    const double e = P("e");
    if (!(k >= 0.0) || !(e > 0.0)) throw ConfigError("decay_envelope needs c >= 0 and e > 0");
    c.term = [k, e](Index n) { return k * power(static_cast<double>(n), -e); };
  } else if (id == "uniform_bound") {
    c.constant = P("M");
    if (!(c.constant >= 0.0)) throw ConfigError("uniform_bound needs M >= 0");
  } else if (id == "oscillation") {
    const double r = P("min_repeats", 3.0);
    if (!(r >= 2.0) || r != std::floor(r)) throw ConfigError("oscillation needs integer min_repeats >= 2");
    c.constant = r;
  }
  return c;
}

}  // namespace bvlab
