#pragma once

// Partial norms of l^p, sup and bv_p type along a horizon. All sums are
// compensated and accumulate in index order.

#include <cstddef>
#include <string>
#include <vector>

#include "bvlab/errors.hpp"
#include "bvlab/numeric.hpp"
#include "bvlab/sequence.hpp"

namespace bvlab {

enum class NormKind { Lp, Sup, Bvp, VarPGrid };

struct PartialTrace {
  NormKind kind = NormKind::Lp;
  double p = 1.0;  // unused for Sup
  Index horizon = 0;
  std::vector<double> values;  // values[n-1] uses terms/increments up to index n

  double at(Index n) const { return values.at(n - 1); }
  double last() const { return values.back(); }

  std::string kind_name() const {
    switch (kind) {
      case NormKind::Lp: return "lp";
      case NormKind::Sup: return "sup";
      case NormKind::Bvp: return "bvp";
      case NormKind::VarPGrid: return "var_p_grid";
    }
    return "?";
  }
};

namespace detail {
inline void check_exponent(double p) {
  if (!(p >= 1.0)) throw ParameterError("norm exponent must be >= 1");
}
inline void check_horizon(Index n, Index min) {
  if (n < min) throw ParameterError("horizon must be at least " + std::to_string(min));
}
}  // namespace detail

/// Terms norm(x(n)) for n = 1..N.
inline std::vector<double> term_norms(const Seq& x, Index N) {
  std::vector<double> out(N);
  for (Index n = 1; n <= N; ++n) out[n - 1] = norm(x(n));
  return out;
}

/// Increments norm(x(n+1) - x(n)) for n = 1..N-1.
inline std::vector<double> increment_norms(const Seq& x, Index N) {
  std::vector<double> out;
  if (N < 2) return out;
  out.reserve(N - 1);
  SpaceElement prev = x(1);
  for (Index n = 1; n < N; ++n) {
    SpaceElement next = x(n + 1);
    out.push_back(distance(next, prev));
    prev = std::move(next);
  }
  return out;
}

/// values[n] = (sum_{k<=n} norm(x(k))^p)^(1/p).
inline PartialTrace lp_partial_norm(const Seq& x, double p, Index N) {
  detail::check_exponent(p);
  detail::check_horizon(N, 1);
  PartialTrace t{NormKind::Lp, p, N, {}};
  t.values.reserve(N);
  CompensatedSum acc;
  for (Index n = 1; n <= N; ++n) {
    acc += power(norm(x(n)), p);
    t.values.push_back(power(acc.value(), 1.0 / p));
  }
  return t;
}

/// values[n] = max_{k<=n} norm(x(k)).
inline PartialTrace sup_partial_norm(const Seq& x, Index N) {
  detail::check_horizon(N, 1);
  PartialTrace t{NormKind::Sup, 0.0, N, {}};
  t.values.reserve(N);
  double m = 0.0;
  for (Index n = 1; n <= N; ++n) {
    m = std::max(m, norm(x(n)));
    t.values.push_back(m);
  }
  return t;
}

/// values[n] = norm(x(1)) + (sum_{k<n} norm(x(k+1) - x(k))^p)^(1/p).
inline PartialTrace bvp_partial_norm(const Seq& x, double p, Index N) {
  detail::check_exponent(p);
  detail::check_horizon(N, 2);
  PartialTrace t{NormKind::Bvp, p, N, {}};
  t.values.reserve(N);
  SpaceElement prev = x(1);
  const double head = norm(prev);
  t.values.push_back(head);
  CompensatedSum acc;
  for (Index n = 1; n < N; ++n) {
    SpaceElement next = x(n + 1);
    acc += power(distance(next, prev), p);
    t.values.push_back(head + power(acc.value(), 1.0 / p));
    prev = std::move(next);
  }
  return t;
}

/// Raw p-th power increment partial sums S(n) = sum_{k<n} norm(x(k+1)-x(k))^p, n = 1..N.
inline std::vector<double> increment_power_sums(const Seq& x, double p, Index N) {
  std::vector<double> out;
  out.reserve(N);
  out.push_back(0.0);
  CompensatedSum acc;
  const auto inc = increment_norms(x, N);
  for (double d : inc) {
    acc += power(d, p);
    out.push_back(acc.value());
  }
  return out;
}

}  // namespace bvlab
