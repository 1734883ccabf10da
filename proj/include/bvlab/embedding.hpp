#pragma once

// Embeds an arbitrary list (u_1, ..., u_L) as a subsequence of a bv_p sequence,
// p > 1: consecutive points are joined by a segment cut into k_n equal pieces,
// with k_n the smallest positive integer such that
//
//   ||u_{n+1} - u_n||^p * k_n^(1-p) <= 2^-n,
//
// so the p-th power increment sum of the result is at most sum_n 2^-n < 1.
// Segment counts grow like 2^(n/(p-1)); indices are 128-bit because for
// p close to 1 a list of 50 points already yields ~1e33 terms.

#include <algorithm>
#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "bvlab/errors.hpp"
#include "bvlab/numeric.hpp"
#include "bvlab/sequence.hpp"
#include "bvlab/space.hpp"

namespace bvlab {

using BigIndex = unsigned __int128;

inline std::string to_string(BigIndex v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

struct EmbeddedSubsequence {
  SpaceInstance space;
  double p = 2.0;
  std::vector<SpaceElement> anchors;   // u_1 .. u_L
  std::vector<BigIndex> segments;      // k_1 .. k_{L-1}
  std::vector<BigIndex> idx;           // idx(n) = 1 + sum_{m<n} k_m, so x(idx(n)) = u_n
  std::vector<double> block_budget;    // ||u_{n+1}-u_n||^p * k_n^(1-p)

  BigIndex length() const { return idx.back(); }

  double budget_total() const {
    CompensatedSum s;
    for (double b : block_budget) s += b;
    return s.value();
  }

  /// x(i), 1-based; the zero element past the last anchor.
  SpaceElement element(BigIndex i) const {
    if (i == 0) throw ParameterError("sequences are 1-indexed");
    if (i > length()) return SpaceElement::zero(space);
    auto it = std::upper_bound(idx.begin(), idx.end(), i);
    const auto n = static_cast<std::size_t>(it - idx.begin()) - 1;  // 0-based block
    const BigIndex j = i - idx[n];
    if (j == 0) return anchors[n];
    const long double t_ld = static_cast<long double>(j) / static_cast<long double>(segments[n]);
    const double t = static_cast<double>(t_ld);
    return lin(t, anchors[n + 1], 1.0 - t, anchors[n]);
  }

  /// The same sequence behind the ordinary Seq interface (first 2^64-1 terms addressable).
  Seq as_seq() const {
    auto self = std::make_shared<const EmbeddedSubsequence>(*this);
    std::optional<Index> len;
    if (length() <= static_cast<BigIndex>(std::numeric_limits<Index>::max())) {
      len = static_cast<Index>(length());
    }
    return Seq::from_rule(
        space, [self](Index i) { return self->element(static_cast<BigIndex>(i)); }, len);
  }
};

namespace detail {

// d^p * k^(1-p) <= 2^-n, evaluated in extended precision.
inline bool segment_budget_ok(long double d, long double p, long double k, int n) {
  return std::pow(d, p) * std::pow(k, 1.0L - p) <= std::ldexp(1.0L, -n);
}

inline BigIndex minimal_segments(double dist, double p, int n) {
  if (dist == 0.0) return 1;
  const long double d = dist;
  const long double pl = p;
  const long double log_k = (pl * std::log(d) + n * std::log(2.0L)) / (pl - 1.0L);
  if (log_k > 120.0L * std::log(2.0L)) {
    throw ParameterError("segment count for block " + std::to_string(n) +
                         " exceeds 2^120; shorten the list or raise p");
  }
  long double est = std::ceil(std::exp(log_k));
  if (est < 1.0L) est = 1.0L;
  auto k = static_cast<BigIndex>(est);
  // The closed form is accurate to a few units; settle minimality exactly
  // where extended precision can still tell k from k-1.
  for (int step = 0; step < 8 && k > 1 && segment_budget_ok(d, pl, static_cast<long double>(k - 1), n);
       ++step) {
    --k;
  }
  for (int step = 0; step < 8 && !segment_budget_ok(d, pl, static_cast<long double>(k), n); ++step) {
    ++k;
  }
  return k;
}

}  // namespace detail

inline EmbeddedSubsequence embed_subsequence(std::span<const SpaceElement> u, double p) {
  if (!(p > 1.0)) throw ParameterError("subsequence embedding needs p > 1 (it fails for p = 1)");
  if (u.empty()) throw ParameterError("subsequence embedding needs at least one point");
  EmbeddedSubsequence out;
  out.space = u.front().space();
  out.p = p;
  out.anchors.assign(u.begin(), u.end());
  out.idx.push_back(1);
  for (std::size_t n = 1; n < u.size(); ++n) {
    const double d = distance(u[n], u[n - 1]);
    const int block = static_cast<int>(n);
    const BigIndex k = detail::minimal_segments(d, p, block);
    out.segments.push_back(k);
    out.block_budget.push_back(power(d, p) * power(static_cast<double>(k), 1.0 - p));
    out.idx.push_back(out.idx.back() + k);
  }
  return out;
}

}  // namespace bvlab
