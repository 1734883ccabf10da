#pragma once

// Concrete normed spaces standing in for the abstract coefficient space E.
//
//   RealD(d, r)  R^d with the r-norm (r = +inf gives the max norm)
//   C00          finitely supported real sequences, sup norm (incomplete)
//   L2Trunc      finitely supported real sequences, Euclidean norm; a model of l^2
//
// Sparse elements store a strictly increasing 1-based support and drop zero
// coordinates, so structural equality coincides with mathematical equality.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bvlab/errors.hpp"
#include "bvlab/numeric.hpp"

namespace bvlab {

enum class InstanceKind { RealD, C00, L2Trunc };

struct SpaceInstance {
  InstanceKind kind = InstanceKind::RealD;
  std::size_t dim = 1;          // RealD only
  double norm_exponent = 2.0;   // RealD only
  bool complete = true;         // metadata, consumed by the rulebook

  static SpaceInstance real(std::size_t d = 1, double exponent = 2.0) {
    if (d == 0) throw ParameterError("RealD dimension must be positive");
    if (!(exponent >= 1.0)) throw ParameterError("RealD norm exponent must be >= 1");
    return {InstanceKind::RealD, d, exponent, true};
  }
  static SpaceInstance c00() { return {InstanceKind::C00, 0, 0.0, false}; }
  static SpaceInstance l2trunc() { return {InstanceKind::L2Trunc, 0, 2.0, true}; }

  bool sparse() const { return kind != InstanceKind::RealD; }

  std::string name() const {
    switch (kind) {
      case InstanceKind::RealD: {
        std::string s = "RealD(" + std::to_string(dim) + ",";
        if (std::isinf(norm_exponent)) return s + "inf)";
        std::string e = std::to_string(norm_exponent);
        e.erase(e.find_last_not_of('0') + 1);
        if (!e.empty() && e.back() == '.') e.pop_back();
        return s + e + ")";
      }
      case InstanceKind::C00: return "C00";
      case InstanceKind::L2Trunc: return "L2Trunc";
    }
    return "?";
  }

  friend bool operator==(const SpaceInstance& a, const SpaceInstance& b) {
    if (a.kind != b.kind) return false;
    if (a.kind != InstanceKind::RealD) return true;
    return a.dim == b.dim && a.norm_exponent == b.norm_exponent;
  }
};

class SpaceElement {
 public:
  SpaceElement() = default;

  static SpaceElement dense(const SpaceInstance& space, std::vector<double> coords,
                            bool rational = true) {
    if (space.sparse()) throw StructuralError("dense coordinates given for a sparse space");
    if (coords.size() != space.dim) {
      throw StructuralError("expected " + std::to_string(space.dim) + " coordinates, got " +
                            std::to_string(coords.size()));
    }
    SpaceElement e;
    e.space_ = space;
    e.values_ = std::move(coords);
    e.rational_ = rational;
    return e;
  }

  static SpaceElement sparse(const SpaceInstance& space, std::vector<std::size_t> support,
                             std::vector<double> values, bool rational = true) {
    if (!space.sparse()) throw StructuralError("sparse coordinates given for RealD");
    if (support.size() != values.size()) {
      throw StructuralError("support and value lists differ in length");
    }
    for (std::size_t i = 0; i < support.size(); ++i) {
      if (support[i] == 0) throw StructuralError("support indices are 1-based");
      if (i > 0 && support[i] <= support[i - 1]) {
        throw StructuralError("support indices must be strictly increasing");
      }
    }
    SpaceElement e;
    e.space_ = space;
    e.rational_ = rational;
    e.support_.reserve(support.size());
    e.values_.reserve(values.size());
    for (std::size_t i = 0; i < support.size(); ++i) {
      if (values[i] != 0.0) {
        e.support_.push_back(support[i]);
        e.values_.push_back(values[i]);
      }
    }
    return e;
  }

  /// Sparse element from the dense list (v_1, ..., v_n).
  static SpaceElement from_prefix(const SpaceInstance& space, const std::vector<double>& head,
                                  bool rational = true) {
    std::vector<std::size_t> support(head.size());
    for (std::size_t i = 0; i < head.size(); ++i) support[i] = i + 1;
    return sparse(space, std::move(support), head, rational);
  }

  static SpaceElement zero(const SpaceInstance& space) {
    SpaceElement e;
    e.space_ = space;
    if (!space.sparse()) e.values_.assign(space.dim, 0.0);
    return e;
  }

  static SpaceElement scalar(double v, bool rational = true) {
    return dense(SpaceInstance::real(1), {v}, rational);
  }

  /// The k-th unit vector e_k (1-based), scaled by s.
  static SpaceElement unit(const SpaceInstance& space, std::size_t k, double s = 1.0) {
    if (k == 0) throw StructuralError("unit vector index is 1-based");
    if (space.sparse()) return sparse(space, {k}, {s});
    if (k > space.dim) throw StructuralError("unit vector index exceeds dimension");
    SpaceElement e = zero(space);
    e.values_[k - 1] = s;
    return e;
  }

  const SpaceInstance& space() const { return space_; }
  std::span<const double> coords() const { return values_; }
  std::span<const std::size_t> support() const { return support_; }
  bool rational() const { return rational_; }

  SpaceElement with_rational(bool r) const {
    SpaceElement e = *this;
    e.rational_ = r;
    return e;
  }

  /// Coordinate k (1-based); zero off the support.
  double coord(std::size_t k) const {
    if (!space_.sparse()) {
      if (k == 0 || k > values_.size()) throw StructuralError("coordinate index out of range");
      return values_[k - 1];
    }
    auto it = std::lower_bound(support_.begin(), support_.end(), k);
    if (it == support_.end() || *it != k) return 0.0;
    return values_[static_cast<std::size_t>(it - support_.begin())];
  }

  /// Scalar value of a RealD(1) element.
  double value() const {
    if (space_.sparse() || space_.dim != 1) throw StructuralError("not a scalar element");
    return values_[0];
  }

  bool is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
  }

  friend bool operator==(const SpaceElement& a, const SpaceElement& b) {
    return a.space_ == b.space_ && a.support_ == b.support_ && a.values_ == b.values_;
  }

 private:
  SpaceInstance space_;
  std::vector<std::size_t> support_;
  std::vector<double> values_;
  bool rational_ = true;

  friend SpaceElement lin(double, const SpaceElement&, double, const SpaceElement&, bool);
};

namespace detail {

inline void require_same(const SpaceElement& u, const SpaceElement& w) {
  if (!(u.space() == w.space())) {
    throw StructuralError("elements of " + u.space().name() + " and " + w.space().name() +
                          " cannot be combined");
  }
}

// Norm of a coordinate list under an instance's norm. Scaled to avoid overflow.
template <class Values>
double norm_of(const SpaceInstance& s, const Values& values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  if (m == 0.0) return 0.0;
  double r = 2.0;
  switch (s.kind) {
    case InstanceKind::C00: return m;
    case InstanceKind::L2Trunc: r = 2.0; break;
    case InstanceKind::RealD:
      r = s.norm_exponent;
      if (std::isinf(r) || s.dim == 1) return m;
      break;
  }
  CompensatedSum acc;
  for (double v : values) acc += power(std::abs(v) / m, r);
  return m * power(acc.value(), 1.0 / r);
}

}  // namespace detail

/// The instance norm of v; v must belong to space.
inline double norm(const SpaceInstance& space, const SpaceElement& v) {
  if (!(v.space() == space)) {
    throw StructuralError("element of " + v.space().name() + " is not in " + space.name());
  }
  return detail::norm_of(space, v.coords());
}

inline double norm(const SpaceElement& v) { return norm(v.space(), v); }

/// a*u + b*w. The result is tagged rational iff both inputs are and the
/// scalars were entered as rationals.
inline SpaceElement lin(double a, const SpaceElement& u, double b, const SpaceElement& w,
                        bool scalars_rational = true) {
  detail::require_same(u, w);
  SpaceElement r;
  r.space_ = u.space_;
  r.rational_ = u.rational_ && w.rational_ && scalars_rational;
  if (!u.space_.sparse()) {
    r.values_.resize(u.values_.size());
    for (std::size_t i = 0; i < u.values_.size(); ++i) {
      r.values_[i] = a * u.values_[i] + b * w.values_[i];
    }
    return r;
  }
  r.support_.reserve(u.support_.size() + w.support_.size());
  r.values_.reserve(u.support_.size() + w.support_.size());
  std::size_t i = 0, j = 0;
  auto push = [&](std::size_t k, double v) {
    if (v != 0.0) {
      r.support_.push_back(k);
      r.values_.push_back(v);
    }
  };
  while (i < u.support_.size() || j < w.support_.size()) {
    if (j == w.support_.size() || (i < u.support_.size() && u.support_[i] < w.support_[j])) {
      push(u.support_[i], a * u.values_[i] + b * 0.0);
      ++i;
    } else if (i == u.support_.size() || w.support_[j] < u.support_[i]) {
      push(w.support_[j], a * 0.0 + b * w.values_[j]);
      ++j;
    } else {
      push(u.support_[i], a * u.values_[i] + b * w.values_[j]);
      ++i;
      ++j;
    }
  }
  return r;
}

inline SpaceElement operator-(const SpaceElement& u, const SpaceElement& w) {
  return lin(1.0, u, -1.0, w);
}
inline SpaceElement operator+(const SpaceElement& u, const SpaceElement& w) {
  return lin(1.0, u, 1.0, w);
}
inline SpaceElement operator*(double a, const SpaceElement& u) {
  return lin(a, u, 0.0, SpaceElement::zero(u.space()));
}

/// norm(u - w) without materializing the difference.
inline double distance(const SpaceElement& u, const SpaceElement& w) {
  detail::require_same(u, w);
  const auto& s = u.space();
  const auto uc = u.coords();
  const auto wc = w.coords();
  if (!s.sparse()) {
    if (s.dim == 1) return std::abs(uc[0] - wc[0]);
    std::vector<double> d(uc.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = uc[i] - wc[i];
    return detail::norm_of(s, d);
  }
  const auto us = u.support();
  const auto ws = w.support();
  std::vector<double> d;
  d.reserve(us.size() + ws.size());
  std::size_t i = 0, j = 0;
  while (i < us.size() || j < ws.size()) {
    if (j == ws.size() || (i < us.size() && us[i] < ws[j])) {
      d.push_back(uc[i++]);
    } else if (i == us.size() || ws[j] < us[i]) {
      d.push_back(-wc[j++]);
    } else {
      d.push_back(uc[i++] - wc[j++]);
    }
  }
  return detail::norm_of(s, d);
}

}  // namespace bvlab
