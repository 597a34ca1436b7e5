#pragma once

#include <functional>
#include <map>

#include "qpg/labelling.hpp"
#include "qpg/plmap.hpp"

namespace qpg {

/// Generator token: zeta1..zeta3, chi1..chi3, optionally inverted.
struct GenToken {
  int gen = 0;  // 0..2 -> zeta_{gen+1}, 3..5 -> chi_{gen-2}
  bool inverse = false;

  std::string str() const;
  static GenToken parse(const std::string& tok);
  friend bool operator==(const GenToken& a, const GenToken& b) {
    return a.gen == b.gen && a.inverse == b.inverse;
  }
};
std::vector<GenToken> parseGenWord(const std::string& text);
std::string formatGenWord(const std::vector<GenToken>& word);

/// Shared inputs of a G_rho instance: the labelling plus the chosen
/// generating triple of H.
struct GrhoContext {
  LabellingPtr rho;
  std::array<PLMap, 3> nu;

  static GrhoContext standard(LabellingPtr rho_) {
    return GrhoContext{std::move(rho_), defaultHGenerators()};
  }
};

struct SupportSpec {
  // Context word -> maximal closed sub-intervals of [0,1] where the unit map
  // differs from the identity. Identity entries are omitted.
  std::map<LWord, std::vector<Interval>> entries;
  bool empty() const { return entries.empty(); }
};

struct MembershipReport {
  bool ok = true;
  int witness_radius = 0;
  std::vector<std::string> failures;
};

/// An element of G_rho in its context-table normal form: a radius k and one
/// unit map per occurring context word of radius k. The map of the line is
///   x . f = n + g_w(x - n)   for x in [n, n+1),  w the context of unit n.
/// Tables are complete over the occurring words; shift_bound is the least
/// integer D with g_w([0,1]) inside [-D, 1+D] for every entry.
class GElement {
 public:
  GElement(LabellingPtr rho, int radius, std::map<LWord, PLMap> table);
  static GElement identityElement(LabellingPtr rho);

  int radius() const { return radius_; }
  int shiftBound() const { return shift_bound_; }
  const std::map<LWord, PLMap>& table() const { return table_; }
  const LabellingPtr& labelling() const { return rho_; }
  const PLMap& unitMap(const LWord& w) const;

  bool isIdentity() const;
  Dyadic evaluate(const Dyadic& x) const;
  Interval evaluateInterval(const Interval& I) const;

  GElement thenCompose(const GElement& o) const;
  GElement inverse() const;
  GElement conjugatedBy(const GElement& h) const;  // h^-1 * this * h
  GElement reduceRadius() const;
  GElement liftToRadius(int K) const;
  bool equalsElement(const GElement& o) const;

  /// Glued map of the element on [unit_lo, unit_hi + 1], taken at the
  /// actual line position (contexts read from the labelling).
  PLMap assembleOnUnits(long long unit_lo, long long unit_hi) const;
  /// Glued local map on [delta_lo, delta_hi + 1] around a virtual unit 0
  /// whose context extension is the word w (radius of w must cover
  /// radius() + 2*max|delta|).
  PLMap assembleAround(const LWord& w, int delta_lo, int delta_hi) const;

  SupportSpec supportSpec() const;
  MembershipReport membershipCheck() const;

 private:
  LabellingPtr rho_;
  int radius_;
  int shift_bound_;
  std::map<LWord, PLMap> table_;
};

GElement generatorElement(const GrhoContext& ctx, const GenToken& tok);
/// lambda: H -> G_rho; rejects maps outside H.
GElement lambdaHom(const GrhoContext& ctx, const PLMap& f);
GElement lambdaHom(LabellingPtr rho, const PLMap& f);
/// Special element lambda_omega(f) for omega = (W, (|W|-1)/2), f in F'.
GElement specialElement(LabellingPtr rho, const LWord& W, const PLMap& f);
GElement wordToElement(const GrhoContext& ctx, const std::vector<GenToken>& word);

/// Direct geometric evaluation of one generator (no context tables); serves
/// as the independent oracle for the table machinery.
Dyadic evaluateGeneratorDirect(const GrhoContext& ctx, const GenToken& tok, const Dyadic& x);

/// Scans units |n| <= search_radius for an exact fixed point (diagonal
/// nodes, slope-1 diagonal segments, dyadic crossings).
std::optional<Dyadic> findFixedPoint(const GElement& e, long long search_radius);
/// Same scan restricted to a region; identity stretches report their
/// midpoint, which keeps the choice interior.
std::optional<Dyadic> findFixedPointIn(const GElement& e, const Interval& region);

/// Best-first search for a word h with I . h strictly inside J. The result
/// is exact-verified; nullopt when the budget is exhausted. Deterministic
/// for a fixed seed.
std::optional<std::vector<GenToken>> proximalSearch(const GrhoContext& ctx, const Interval& I,
                                                    const Interval& J, long long budget,
                                                    uint64_t seed);

}  // namespace qpg
