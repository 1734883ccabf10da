#pragma once

// The generator catalog: every map f: E -> E used by the experiments, with
// declared facts for the rulebook cross-check and explicit witness families
// for the classifier.

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bvlab/conditions.hpp"
#include "bvlab/errors.hpp"
#include "bvlab/numeric.hpp"
#include "bvlab/sequence.hpp"
#include "bvlab/space.hpp"

namespace bvlab {

enum class HolderRegime { Global, Strg, Bnd, Comp };

inline std::string regime_name(HolderRegime r) {
  switch (r) {
    case HolderRegime::Global: return "global";
    case HolderRegime::Strg: return "strg";
    case HolderRegime::Bnd: return "bnd";
    case HolderRegime::Comp: return "comp";
  }
  return "?";
}

inline HolderRegime parse_regime(const std::string& s) {
  if (s == "global") return HolderRegime::Global;
  if (s == "strg") return HolderRegime::Strg;
  if (s == "bnd") return HolderRegime::Bnd;
  if (s == "comp") return HolderRegime::Comp;
  throw ConfigError("unknown Hoelder regime '" + s + "'");
}

using Pair = std::pair<SpaceElement, SpaceElement>;

/// Pairs that are expected to violate a candidate constant. Arguments:
/// alpha, the regime's delta (Strg) or radius (Bnd), and the candidate L.
using WitnessFamily = std::function<std::vector<Pair>(double alpha, double scale, double candidate)>;

struct Generator {
  std::string id;
  SpaceInstance space;
  std::function<SpaceElement(const SpaceElement&)> eval;
  std::string declared_class;
  std::string notes;
  std::vector<GenFact> facts;
  std::map<HolderRegime, WitnessFamily> witnesses;
};

/// f(v); v must lie in f's space.
inline SpaceElement eval_generator(const Generator& f, const SpaceElement& v) {
  if (!(v.space() == f.space)) {
    throw StructuralError("generator " + f.id + " on " + f.space.name() + " applied to an element of " +
                          v.space().name());
  }
  return f.eval(v);
}

struct CatalogGenEntry {
  std::string id;
  std::string space;
  std::string params;
  std::string description;
};

inline const std::vector<CatalogGenEntry>& generator_catalog() {
  static const std::vector<CatalogGenEntry> entries = {
      {"constant", "any (default RealD(1))", "c", "f(u) = c e_1"},
      {"identity", "any (default RealD(1))", "", "f(u) = u"},
      {"norm_reciprocal_c00", "C00", "", "f(u) = u / ||u - a||_inf, a = (1, 1/4, 1/9, ...)"},
      {"power_rational_indicator", "RealD(1)", "p, q", "f(u) = |u|^(p/q) if u is tagged rational, else 0"},
      {"shift_metric", "RealD(1) restricted to the union of [4n, 4n+1]", "", "f(u) = u + 4n^2 on [4n, 4n+1]"},
      {"sin_psi_l2", "L2Trunc", "", "f(u) = (sin psi(u), 0, ...), psi(u) = sup_n (2pi+1) n |u(n)| - n"},
      {"square", "RealD(1)", "", "f(u) = u^2"},
      {"zero", "any (default RealD(1))", "", "f(u) = 0"},
  };
  return entries;
}

namespace detail {

inline GenFact sat(GenTag t, double hi = kAnyExponent, std::string src = {}) {
  return {t, true, 0.0, hi, false, std::move(src)};
}
inline GenFact vio(GenTag t, double lo = 0.0, bool closed = false, std::string src = {}) {
  return {t, false, lo, kAnyExponent, closed, std::move(src)};
}

// ||u - a||_inf for u in C00: the support terms |u_k - k^-2| and, off the
// support, 1/k0^2 at the smallest absent index k0.
inline double distance_to_a(const SpaceElement& u) {
  const auto sup = u.support();
  const auto val = u.coords();
  double m = 0.0;
  std::size_t k0 = 1;
  for (std::size_t i = 0; i < sup.size(); ++i) {
    m = std::max(m, std::abs(val[i] - a_coord(sup[i])));
    if (sup[i] == k0) ++k0;
  }
  return std::max(m, a_coord(k0));
}

// sin(psi(u)) for finitely supported u. Each term (2pi+1) k |u_k| - k equals
// 2pi t + k (|u_k| - 1) with t = k |u_k|; reducing t modulo 1 before the sine
// keeps psi(e_k) = 2 pi k exact.
inline double sin_psi(const SpaceElement& u) {
  const double two_pi = 2.0 * std::numbers::pi;
  const auto sup = u.support();
  const auto val = u.coords();
  std::size_t k0 = 1;
  double best = -std::numeric_limits<double>::infinity();
  double best_arg = 0.0;
  for (std::size_t i = 0; i < sup.size(); ++i) {
    const double k = static_cast<double>(sup[i]);
    const double a = std::abs(val[i]);
    const double psi = (two_pi + 1.0) * k * a - k;
    if (psi > best) {
      best = psi;
      const double t = k * a;
      best_arg = two_pi * (t - std::round(t)) + k * (a - 1.0);
    }
    if (sup[i] == k0) ++k0;
  }
  const double off = -static_cast<double>(k0);
  if (off > best) return std::sin(off);
  return std::sin(best_arg);
}

inline SpaceElement const_element(const SpaceInstance& s, double c) {
  if (c == 0.0) return SpaceElement::zero(s);
  return SpaceElement::unit(s, 1, c);
}

}  // namespace detail

/// Builds a catalog generator. space overrides the default instance for the
/// space-generic entries (identity, constant, zero). Unknown ids raise LookupError.
inline Generator catalog_generator(const std::string& id, const std::map<std::string, double>& params = {},
                                   std::optional<SpaceInstance> space = std::nullopt) {
  using detail::sat;
  using detail::vio;
  using G = GenTag;
  auto param = [&](const std::string& k) {
    auto it = params.find(k);
    if (it == params.end()) throw ConfigError("generator '" + id + "' needs parameter '" + k + "'");
    return it->second;
  };
  auto fixed_space = [&](const SpaceInstance& s) {
    if (space && !(*space == s)) throw ConfigError("generator '" + id + "' lives on " + s.name());
    return s;
  };
  const SpaceInstance scalar = SpaceInstance::real(1);
  Generator g;
  g.id = id;

  if (id == "identity") {
    g.space = space.value_or(scalar);
    g.eval = [](const SpaceElement& u) { return u; };
    g.declared_class = "global(1)";
    g.notes = "Lipschitz, so strg for every exponent; unbounded";
    g.facts = {sat(G::HolderStrg, 1.0), sat(G::PowerBoundAtZero, 1.0), vio(G::PowerBoundAtZero, 1.0),
               vio(G::LocallyConstantAtZero), vio(G::BoundedOnE)};
    g.witnesses[HolderRegime::Global] = [s = g.space](double alpha, double, double) {
      std::vector<Pair> out;
      if (alpha >= 1.0) return out;
      const SpaceElement zero = SpaceElement::zero(s);
      for (int k = 0; k <= 12; ++k) out.emplace_back(zero, SpaceElement::unit(s, 1, std::pow(10.0, k)));
      return out;
    };
  } else if (id == "square") {
    g.space = fixed_space(scalar);
    g.eval = [](const SpaceElement& u) {
      const double v = u.value();
      return SpaceElement::scalar(v * v, u.rational());
    };
    g.declared_class = "bnd(1)";
    g.notes = "Lipschitz on bounded sets, not strg for any exponent";
    g.facts = {sat(G::HolderBounded, 1.0), sat(G::LocallyBoundedPlusPowerBound, 2.0),
               vio(G::PowerBoundAtZero, 2.0), vio(G::HolderStrg, 0.0), vio(G::BoundedOnE),
               vio(G::LocallyConstantAtZero)};
    auto strg = [](double alpha, double delta, double L) {
      const double u = 0.5 * L * std::pow(delta, alpha - 1.0);
      double w = u + delta;
      while (w - u > delta) w = std::nextafter(w, u);  // keep the rounded distance within delta
      return std::vector<Pair>{{SpaceElement::scalar(u), SpaceElement::scalar(w)}};
    };
    g.witnesses[HolderRegime::Strg] = strg;
    g.witnesses[HolderRegime::Global] = [strg](double alpha, double, double L) { return strg(alpha, 1.0, L); };
  } else if (id == "power_rational_indicator") {
    const double p = param("p");
    const double q = param("q");
    if (!(p >= 1.0) || !(q >= 1.0)) throw ParameterError("power_rational_indicator needs p, q >= 1");
    const double e = p / q;
    g.space = fixed_space(scalar);
    g.eval = [e](const SpaceElement& u) {
      if (!u.rational()) return SpaceElement::scalar(0.0, true);
      const bool integral = e == std::floor(e);
      return SpaceElement::scalar(power(std::abs(u.value()), e), integral);
    };
    g.declared_class = "power bound at 0";
    g.notes = "continuous only at 0; |f(u)-f(w)| <= |u|^(p/q) + |w|^(p/q)";
    g.facts = {sat(G::LocallyBoundedPlusPowerBound, e), vio(G::PowerBoundAtZero, e), vio(G::ContinuousOnE),
               vio(G::BoundedOnE), vio(G::LocallyConstantAtZero)};
    auto jump = [](double, double, double) {
      std::vector<Pair> out;
      for (int k = 1; k <= 9; ++k) {
        const double eps = std::pow(10.0, -k);
        out.emplace_back(SpaceElement::scalar(1.0, true), SpaceElement::scalar(1.0 + eps, false));
      }
      return out;
    };
    g.witnesses[HolderRegime::Global] = jump;
    g.witnesses[HolderRegime::Strg] = jump;
    g.witnesses[HolderRegime::Bnd] = jump;
  } else if (id == "norm_reciprocal_c00") {
    g.space = fixed_space(SpaceInstance::c00());
    g.eval = [](const SpaceElement& u) {
      const double d = detail::distance_to_a(u);
      return lin(1.0 / d, u, 0.0, SpaceElement::zero(u.space()), false);
    };
    g.declared_class = "comp(1)";
    g.notes = "Lipschitz on compact sets; unbounded on the unit ball";
    g.facts = {sat(G::HolderCompact, 1.0), sat(G::PowerBoundAtZero, 1.0), vio(G::PowerBoundAtZero, 1.0),
               vio(G::HolderBounded, 0.0), vio(G::LocallyBounded), vio(G::LocallyConstantAtZero)};
    g.witnesses[HolderRegime::Bnd] = [](double, double radius, double) {
      std::vector<Pair> out;
      if (radius < 1.0) return out;
      for (Index n = 1; n <= 200; ++n) out.emplace_back(prefix_of_a_element(n), prefix_of_a_element(n + 1));
      return out;
    };
  } else if (id == "sin_psi_l2") {
    g.space = fixed_space(SpaceInstance::l2trunc());
    g.eval = [](const SpaceElement& u) {
      return SpaceElement::sparse(u.space(), {1}, {detail::sin_psi(u)}, false);
    };
    g.declared_class = "bounded, comp(1)";
    g.notes = "bounded, Lipschitz on compact sets, not Lipschitz on bounded sets";
    g.facts = {sat(G::HolderCompact, 1.0), sat(G::BoundedOnE), vio(G::HolderBounded, 0.5),
               vio(G::LocallyConstantAtZero)};
    g.witnesses[HolderRegime::Bnd] = [s = g.space](double, double radius, double) {
      std::vector<Pair> out;
      if (radius < 1.0) return out;
      for (Index k = 5; k <= 2000; k += (k < 100 ? 1 : 50)) {
        const double kk = static_cast<double>(k);
        out.emplace_back(SpaceElement::unit(s, k), SpaceElement::unit(s, k, 1.0 - 1.0 / (kk * kk)));
      }
      return out;
    };
  } else if (id == "constant") {
    const double c = param("c");
    g.space = space.value_or(scalar);
    const SpaceElement value = detail::const_element(g.space, c);
    g.eval = [value](const SpaceElement&) { return value; };
    g.declared_class = c == 0.0 ? "zero" : "constant";
    g.facts = {sat(c == 0.0 ? G::ZeroMap : G::ConstantMap)};
    if (c != 0.0) g.facts.push_back(vio(G::ZeroMap));
  } else if (id == "zero") {
    g.space = space.value_or(scalar);
    const SpaceElement value = SpaceElement::zero(g.space);
    g.eval = [value](const SpaceElement&) { return value; };
    g.declared_class = "zero";
    g.facts = {sat(G::ZeroMap)};
  } else if (id == "shift_metric") {
    g.space = fixed_space(scalar);
    g.eval = [](const SpaceElement& u) {
      const double v = u.value();
      const double n = std::floor(v / 4.0);
      if (!(n >= 1.0) || v > 4.0 * n + 1.0) {
        throw DomainError("shift_metric is defined on the union of [4n, 4n+1], n >= 1; got " + std::to_string(v));
      }
      return SpaceElement::scalar(v + 4.0 * n * n, u.rational());
    };
    g.declared_class = "strg(1)";
    g.notes = "metric-space example; not in the rulebook";
    g.witnesses[HolderRegime::Global] = [](double, double, double) {
      std::vector<Pair> out;
      for (int n = 2; n <= 4096; n *= 2) {
        out.emplace_back(SpaceElement::scalar(4.0), SpaceElement::scalar(4.0 * n));
      }
      return out;
    };
  } else {
    throw LookupError("unknown generator '" + id + "'");
  }
  // Facts shared by every non-constant catalog entry.
  if (id != "constant" && id != "zero") {
    g.facts.push_back(vio(G::ConstantMap));
  }
  return g;
}

}  // namespace bvlab
