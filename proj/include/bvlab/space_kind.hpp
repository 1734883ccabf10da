#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "bvlab/errors.hpp"

namespace bvlab {

enum class SeqSpaceTag { C0, C, Linf, Lp, Bvp };

/// One of the sequence spaces c0, c, l^inf, l^p, bv_p (over whatever E).
struct SpaceKind {
  SeqSpaceTag tag = SeqSpaceTag::Bvp;
  double p = 1.0;  // meaningful for Lp and Bvp only

  static SpaceKind c0() { return {SeqSpaceTag::C0, 0.0}; }
  static SpaceKind c() { return {SeqSpaceTag::C, 0.0}; }
  static SpaceKind linf() { return {SeqSpaceTag::Linf, 0.0}; }
  static SpaceKind lp(double p) { return {SeqSpaceTag::Lp, check(p)}; }
  static SpaceKind bvp(double p) { return {SeqSpaceTag::Bvp, check(p)}; }

  bool has_param() const { return tag == SeqSpaceTag::Lp || tag == SeqSpaceTag::Bvp; }

  static std::string tag_name(SeqSpaceTag t) {
    switch (t) {
      case SeqSpaceTag::C0: return "c0";
      case SeqSpaceTag::C: return "c";
      case SeqSpaceTag::Linf: return "linf";
      case SeqSpaceTag::Lp: return "lp";
      case SeqSpaceTag::Bvp: return "bvp";
    }
    return "?";
  }

  static std::optional<SeqSpaceTag> parse_tag(const std::string& s) {
    if (s == "c0") return SeqSpaceTag::C0;
    if (s == "c") return SeqSpaceTag::C;
    if (s == "linf") return SeqSpaceTag::Linf;
    if (s == "lp") return SeqSpaceTag::Lp;
    if (s == "bvp") return SeqSpaceTag::Bvp;
    return std::nullopt;
  }

  /// "c0", "c", "linf", "lp:2", "bvp:1.5".
  static SpaceKind parse(const std::string& text) {
    const auto colon = text.find(':');
    const auto tag = parse_tag(text.substr(0, colon));
    if (!tag) throw ConfigError("unknown sequence space '" + text + "'");
    SpaceKind k{*tag, 0.0};
    if (k.has_param()) {
      if (colon == std::string::npos) throw ConfigError("space '" + text + "' needs an exponent");
      try {
        std::size_t used = 0;
        const std::string num = text.substr(colon + 1);
        k.p = std::stod(num, &used);
        if (used != num.size()) throw ConfigError("bad exponent in '" + text + "'");
      } catch (const std::logic_error&) {
        throw ConfigError("bad exponent in '" + text + "'");
      }
      if (!(k.p >= 1.0) || std::isinf(k.p)) throw ConfigError("exponent in '" + text + "' must be in [1, inf)");
    } else if (colon != std::string::npos) {
      throw ConfigError("space '" + text + "' takes no exponent");
    }
    return k;
  }

  std::string name() const {
    if (!has_param()) return tag_name(tag);
    std::string e = std::to_string(p);
    e.erase(e.find_last_not_of('0') + 1);
    if (!e.empty() && e.back() == '.') e.pop_back();
    return tag_name(tag) + ":" + e;
  }

  friend bool operator==(const SpaceKind& a, const SpaceKind& b) {
    return a.tag == b.tag && (!a.has_param() || a.p == b.p);
  }

 private:
  static double check(double p) {
    if (!(p >= 1.0) || std::isinf(p)) throw ParameterError("sequence space exponent must be in [1, inf)");
    return p;
  }
};

}  // namespace bvlab
