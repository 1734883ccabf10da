#pragma once

// 1-indexed sequences over a SpaceInstance: finite prefix + optional pure tail
// rule, zero-extended past a known length. Also the named counterexample
// sequences and the head/tail projections P_n and Q_n.

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bvlab/errors.hpp"
#include "bvlab/numeric.hpp"
#include "bvlab/space.hpp"

namespace bvlab {

using Index = std::size_t;
using TailRule = std::function<SpaceElement(Index)>;

class Seq {
 public:
  explicit Seq(SpaceInstance space, std::vector<SpaceElement> prefix = {}, TailRule tail = {},
               std::optional<Index> known_length = std::nullopt)
      : space_(space),
        prefix_(std::make_shared<const std::vector<SpaceElement>>(std::move(prefix))),
        known_length_(known_length),
        zero_(SpaceElement::zero(space)) {
    for (const auto& e : *prefix_) {
      if (!(e.space() == space_)) {
        throw StructuralError("sequence element from " + e.space().name() + " in a sequence over " +
                              space_.name());
      }
    }
    if (tail) tail_ = std::make_shared<const TailRule>(std::move(tail));
    if (!tail_ && !known_length_) known_length_ = prefix_->size();
  }

  /// Finite sequence (e_1, ..., e_k, 0, 0, ...).
  static Seq finite(const SpaceInstance& space, std::vector<SpaceElement> elements) {
    return Seq(space, std::move(elements));
  }

  /// Finite scalar sequence.
  static Seq scalars(const std::vector<double>& values) {
    std::vector<SpaceElement> els;
    els.reserve(values.size());
    for (double v : values) els.push_back(SpaceElement::scalar(v));
    return finite(SpaceInstance::real(1), std::move(els));
  }

  static Seq from_rule(const SpaceInstance& space, TailRule rule,
                       std::optional<Index> known_length = std::nullopt) {
    return Seq(space, {}, std::move(rule), known_length);
  }

  const SpaceInstance& space() const { return space_; }

  /// Indices past this are the zero element; nullopt for genuinely infinite sequences.
  std::optional<Index> known_length() const { return known_length_; }

  SpaceElement element(Index n) const {
    if (n == 0) throw ParameterError("sequences are 1-indexed");
    if (known_length_ && n > *known_length_) return zero_;
    if (n <= prefix_->size()) return (*prefix_)[n - 1];
    if (tail_) {
      SpaceElement e = (*tail_)(n);
      if (!(e.space() == space_)) throw StructuralError("tail rule left the sequence space");
      return e;
    }
    return zero_;
  }

  SpaceElement operator()(Index n) const { return element(n); }

 private:
  SpaceInstance space_;
  std::shared_ptr<const std::vector<SpaceElement>> prefix_;
  std::shared_ptr<const TailRule> tail_;
  std::optional<Index> known_length_;
  SpaceElement zero_;
};

/// P_n: keeps the first n terms, zero afterwards.
inline Seq project_head(const Seq& x, Index n) {
  std::optional<Index> len = n;
  if (x.known_length()) len = std::min(n, *x.known_length());
  const SpaceElement zero = SpaceElement::zero(x.space());
  return Seq::from_rule(
      x.space(), [x, n, zero](Index k) { return k <= n ? x(k) : zero; }, len);
}

/// Q_n = Id - P_n: zero on the first n terms, x afterwards.
inline Seq project_tail(const Seq& x, Index n) {
  const SpaceElement zero = SpaceElement::zero(x.space());
  return Seq::from_rule(
      x.space(), [x, n, zero](Index k) { return k <= n ? zero : x(k); }, x.known_length());
}

/// lead_zeros zeros, then (u, w) repeated m times, then zeros.
inline Seq alternating_block(const SpaceElement& u, const SpaceElement& w, Index m,
                             Index lead_zeros = 0) {
  detail::require_same(u, w);
  const SpaceElement zero = SpaceElement::zero(u.space());
  const Index end = lead_zeros + 2 * m;
  return Seq::from_rule(
      u.space(),
      [u, w, zero, lead_zeros, end](Index k) {
        if (k <= lead_zeros || k > end) return zero;
        return ((k - lead_zeros) % 2 == 1) ? u : w;
      },
      end);
}

namespace detail {

// Thread-safe memo of partial sums s(n) = sum_{k<=n} term(k), accumulated in
// index order with compensated summation so every caller sees the same bits.
class PartialSumCache {
 public:
  explicit PartialSumCache(std::function<double(Index)> term) : term_(std::move(term)) {}

  double at(Index n) {
    std::lock_guard<std::mutex> lock(mu_);
    while (sums_.size() < n) {
      acc_ += term_(sums_.size() + 1);
      sums_.push_back(acc_.value());
    }
    return sums_[n - 1];
  }

 private:
  std::function<double(Index)> term_;
  std::mutex mu_;
  std::vector<double> sums_;
  CompensatedSum acc_;
};

}  // namespace detail

/// a(k) = 1/k^2, the limit point that c00 misses.
inline double a_coord(Index k) {
  const double kk = static_cast<double>(k);
  return 1.0 / (kk * kk);
}

/// P_n(a) as an element of C00.
inline SpaceElement prefix_of_a_element(Index n) {
  std::vector<double> head(n);
  for (Index k = 1; k <= n; ++k) head[k - 1] = a_coord(k);
  return SpaceElement::from_prefix(SpaceInstance::c00(), head);
}

struct CatalogSeqId {
  std::string id;
  std::map<std::string, double> params;

  double param(const std::string& key, double fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
  }
  double required(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) throw ConfigError("sequence '" + id + "' needs parameter '" + key + "'");
    return it->second;
  }
};

struct CatalogSeqEntry {
  std::string id;
  std::string params;
  std::string description;
};

inline const std::vector<CatalogSeqEntry>& sequence_catalog() {
  static const std::vector<CatalogSeqEntry> entries = {
      {"altblock_family", "u, w, m, lead_zeros",
       "lead_zeros zeros, then u,w repeated m times, then zeros (scalar)"},
      {"alternating01", "", "(0,1,0,1,...): bounded, not convergent, not in bv_p"},
      {"constant", "c", "(c,c,c,...)"},
      {"ek_oscillation", "n",
       "(e_n, (1-n^-2)e_n, ...) in l^2 with 2n^2 non-zero entries, bv_1 norm <= 4"},
      {"harmonic_partial", "beta", "x(n) = sum_{k<=n} k^-beta"},
      {"prefix_of_a", "", "x(n) = P_n(a) in c00 with a = (1, 1/4, 1/9, ...)"},
      {"reciprocal", "beta, scale, rational",
       "x(n) = scale * n^-beta, rational tag given explicitly"},
      {"zero", "", "the zero scalar sequence"},
  };
  return entries;
}

/// Builds a named catalog sequence. Unknown ids raise LookupError.
inline Seq catalog_sequence(const CatalogSeqId& id) {
  const auto scalar = SpaceInstance::real(1);
  if (id.id == "harmonic_partial") {
    const double beta = id.param("beta", 1.0);
    if (!(beta > 0.0)) throw ParameterError("harmonic_partial needs beta > 0");
    auto cache = std::make_shared<detail::PartialSumCache>(
        [beta](Index k) { return power(1.0 / static_cast<double>(k), beta); });
    return Seq::from_rule(scalar, [cache](Index n) { return SpaceElement::scalar(cache->at(n)); });
  }
  if (id.id == "alternating01") {
    return Seq::from_rule(scalar,
                          [](Index n) { return SpaceElement::scalar(n % 2 == 0 ? 1.0 : 0.0); });
  }
  if (id.id == "prefix_of_a") {
    return Seq::from_rule(SpaceInstance::c00(), [](Index n) { return prefix_of_a_element(n); });
  }
  if (id.id == "altblock_family") {
    const double m = id.required("m");
    const double lead = id.param("lead_zeros", 0.0);
    if (!(m >= 1.0) || m != std::floor(m) || lead < 0.0 || lead != std::floor(lead)) {
      throw ParameterError("altblock_family needs integer m >= 1 and lead_zeros >= 0");
    }
    return alternating_block(SpaceElement::scalar(id.required("u")),
                             SpaceElement::scalar(id.param("w", 0.0)), static_cast<Index>(m),
                             static_cast<Index>(lead));
  }
  if (id.id == "ek_oscillation") {
    const double n = id.required("n");
    if (!(n >= 1.0) || n != std::floor(n)) throw ParameterError("ek_oscillation needs integer n >= 1");
    const auto k = static_cast<Index>(n);
    const auto l2 = SpaceInstance::l2trunc();
    const double shrink = 1.0 - 1.0 / (n * n);
    return alternating_block(SpaceElement::unit(l2, k), SpaceElement::unit(l2, k, shrink), k * k);
  }
  if (id.id == "reciprocal") {
    const double beta = id.param("beta", 1.0);
    const double scale = id.param("scale", 1.0);
    const bool rational = id.param("rational", 1.0) != 0.0;
    return Seq::from_rule(scalar, [beta, scale, rational](Index n) {
      return SpaceElement::scalar(scale * power(1.0 / static_cast<double>(n), beta), rational);
    });
  }
  if (id.id == "constant") {
    const double c = id.required("c");
    return Seq::from_rule(scalar, [c](Index) { return SpaceElement::scalar(c); });
  }
  if (id.id == "zero") return Seq::finite(scalar, {});
  throw LookupError("unknown catalog sequence '" + id.id + "'");
}

}  // namespace bvlab
