#pragma once

#include <array>
#include <optional>
#include <vector>

#include "qpg/interval.hpp"

namespace qpg {

struct ClassifyFlags {
  bool in_F = false;       // dyadic breakpoints, power-of-2 slopes
  bool in_H = false;       // boundary slopes coincide
  bool in_Fprime = false;  // support closure inside (0,1)
};

/// Strictly increasing piecewise-linear map with dyadic breakpoints and
/// power-of-2 slopes, stored as its node list. Canonical form merges
/// collinear nodes, so equality of node lists is semantic equality.
class PLMap {
 public:
  struct Node {
    Dyadic x, y;
    friend bool operator==(const Node& a, const Node& b) { return a.x == b.x && a.y == b.y; }
  };

  explicit PLMap(std::vector<Node> nodes);
  static PLMap identityOn(const Interval& d);

  const std::vector<Node>& nodes() const { return nodes_; }
  size_t segmentCount() const { return nodes_.size() - 1; }
  Interval domain() const { return Interval(nodes_.front().x, nodes_.back().x); }
  Interval range() const { return Interval(nodes_.front().y, nodes_.back().y); }
  bool fixesEndpoints() const {
    return nodes_.front().x == nodes_.front().y && nodes_.back().x == nodes_.back().y;
  }
  bool isIdentity() const;

  /// log2 of the slope of segment i.
  long log2Slope(size_t i) const;

  Dyadic evaluate(const Dyadic& x) const;
  Dyadic evaluateInverse(const Dyadic& y) const;

  /// Right-action composition: x -> g(this(x)). Requires range() == g.domain().
  PLMap thenCompose(const PLMap& g) const;
  /// Same, but only requires range() to be contained in g.domain().
  PLMap composeInto(const PLMap& g) const;
  PLMap inverse() const;

  PLMap restrictTo(const Interval& sub) const;
  PLMap shiftedBy(const Dyadic& s) const;               // (x+s, y+s)
  PLMap scaledByInteger(const BigInt& s) const;         // (s*x, s*y), s >= 1
  /// Conjugate by the isometry carrying domain() onto target (equal lengths).
  PLMap transportTo(const Interval& target, bool reverse) const;
  /// Conjugate by s -> 1 - s; requires domain [0,1].
  PLMap flipUnit() const;

  /// One-sided log2 slopes at x (none on the missing side at an endpoint).
  std::array<std::optional<long>, 2> germ(const Dyadic& x) const;

  /// Maximal closed intervals on which the map differs from the identity.
  std::vector<Interval> nonIdentityIntervals() const;

  /// Joins consecutive pieces; domains must chain and values agree at the seams.
  static PLMap glue(const std::vector<PLMap>& pieces);

  friend bool operator==(const PLMap& a, const PLMap& b) { return a.nodes_ == b.nodes_; }
  friend bool operator!=(const PLMap& a, const PLMap& b) { return !(a == b); }

  std::string str() const;

 private:
  size_t segmentIndexFor(const Dyadic& x) const;
  std::vector<Node> nodes_;
};

/// Membership flags for a map of [0,1] fixing both endpoints.
ClassifyFlags classify(const PLMap& f);

/// The unique dyadic with minimal exponent strictly inside (a, b).
Dyadic simplestInteriorDyadic(const Dyadic& a, const Dyadic& b);

/// Orientation-preserving PL map src -> dst with power-of-2 slopes, built by
/// bisecting both intervals at their simplest interior dyadics until every
/// piece pair has a power-of-2 length ratio.
PLMap dyadicInterpolate(const Interval& src, const Interval& dst);

/// Extends partial: [p,q] -> [p',q'] to a homeomorphism of frame fixing its
/// endpoints, filling both sides with dyadicInterpolate. frame must strictly
/// contain [p,q] and [p',q'].
PLMap extendToHomeo(const PLMap& partial, const Interval& frame);

/// Extends f (fixing its endpoints) by the identity to the enclosing box.
PLMap extendByIdentity(const PLMap& f, const Interval& box);

/// Standard generator x_n of Thompson's F on [0,1].
PLMap thompsonX(int n);

/// Default generating triple of H: x0*x1^-2, x1*x2^-1, x2*x3^-1.
std::array<PLMap, 3> defaultHGenerators();

}  // namespace qpg
