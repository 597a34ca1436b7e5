#pragma once

#include "qpg/dyadic.hpp"

namespace qpg {

/// Compact interval [lo, hi] with dyadic endpoints, lo < hi.
struct Interval {
  Dyadic lo, hi;

  Interval(Dyadic l, Dyadic h) : lo(std::move(l)), hi(std::move(h)) {
    if (!(lo < hi)) throw std::invalid_argument("Interval: requires lo < hi");
  }

  Dyadic length() const { return hi - lo; }
  Dyadic midpoint() const { return (lo + hi).half(); }

  bool contains(const Dyadic& x) const { return lo <= x && x <= hi; }
  bool containsStrictly(const Dyadic& x) const { return lo < x && x < hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  /// o inside the open interior.
  bool containsStrictly(const Interval& o) const { return lo < o.lo && o.hi < hi; }
  bool intersects(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }

  Interval shiftedBy(const Dyadic& s) const { return Interval(lo + s, hi + s); }
  /// Image under the unitwise reflection iota; defined when the interval
  /// sits inside one unit [n, n+1].
  Interval flippedInUnit() const {
    Dyadic c = Dyadic(lo.floorInt() * 2 + 1, 0);  // reflection centre 2n+1
    if (hi > c - Dyadic(lo.floorInt())) throw std::domain_error("flippedInUnit: crosses a unit");
    return Interval(c - hi, c - lo);
  }

  friend bool operator==(const Interval& a, const Interval& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
  friend bool operator!=(const Interval& a, const Interval& b) { return !(a == b); }

  std::string str() const { return "[" + lo.str() + ", " + hi.str() + "]"; }

  static Interval hull(const Interval& a, const Interval& b) {
    return Interval(min(a.lo, b.lo), max(a.hi, b.hi));
  }
};

}  // namespace qpg
