#include "qpg/grho.hpp"

#include <algorithm>
#include <queue>
#include <random>
#include <sstream>

namespace qpg {

std::string GenToken::str() const {
  std::string base = gen < 3 ? "zeta" + std::to_string(gen + 1) : "chi" + std::to_string(gen - 2);
  return inverse ? base + "^-1" : base;
}

GenToken GenToken::parse(const std::string& tok) {
  std::string t = tok;
  GenToken out;
  if (t.size() > 3 && t.substr(t.size() - 3) == "^-1") {
    out.inverse = true;
    t = t.substr(0, t.size() - 3);
  }
  if (t.size() >= 5 && t.substr(0, 4) == "zeta")
    out.gen = std::stoi(t.substr(4)) - 1;
  else if (t.size() >= 4 && t.substr(0, 3) == "chi")
    out.gen = std::stoi(t.substr(3)) - 1 + 3;
  else
    throw std::invalid_argument("bad generator token: " + tok);
  if (out.gen < 0 || out.gen > 5) throw std::invalid_argument("bad generator index: " + tok);
  return out;
}

std::vector<GenToken> parseGenWord(const std::string& text) {
  std::vector<GenToken> out;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) out.push_back(GenToken::parse(tok));
  return out;
}

std::string formatGenWord(const std::vector<GenToken>& word) {
  std::string out;
  for (const auto& t : word) {
    if (!out.empty()) out += " ";
    out += t.str();
  }
  return out;
}

namespace {

BigInt ceilInt(const Dyadic& x) { return x.isInteger() ? x.floorInt() : x.floorInt() + 1; }

int shiftBoundOf(const std::map<LWord, PLMap>& table) {
  Dyadic lo(0), hi(1);
  for (const auto& [w, g] : table) {
    lo = min(lo, g.range().lo);
    hi = max(hi, g.range().hi);
  }
  // least integer D with [lo, hi] inside [-D, 1+D]
  BigInt d = std::max(std::max(ceilInt(-lo), ceilInt(hi - Dyadic(1))), BigInt(0));
  return d.convert_to<int>();
}

}  // namespace

GElement::GElement(LabellingPtr rho, int radius, std::map<LWord, PLMap> table)
    : rho_(std::move(rho)), radius_(radius), table_(std::move(table)) {
  const auto& occ = rho_->contextFactors(radius_);
  if (occ.words.size() != table_.size())
    throw std::invalid_argument("GElement: table size " + std::to_string(table_.size()) +
                                " != occurring words " + std::to_string(occ.words.size()));
  for (const auto& w : occ.words) {
    auto it = table_.find(w);
    if (it == table_.end())
      throw std::invalid_argument("GElement: missing entry for " + w.str());
    if (!(it->second.domain() == Interval(0, 1)))
      throw std::invalid_argument("GElement: unit map domain must be [0,1]");
  }
  shift_bound_ = shiftBoundOf(table_);
}

GElement GElement::identityElement(LabellingPtr rho) {
  std::map<LWord, PLMap> table;
  for (const auto& w : rho->contextFactors(0).words)
    table.emplace(w, PLMap::identityOn(Interval(0, 1)));
  return GElement(std::move(rho), 0, std::move(table));
}

const PLMap& GElement::unitMap(const LWord& w) const {
  auto it = table_.find(w);
  if (it == table_.end()) throw std::invalid_argument("GElement: no entry for " + w.str());
  return it->second;
}

bool GElement::isIdentity() const {
  for (const auto& [w, g] : table_)
    if (!g.isIdentity()) return false;
  return true;
}

Dyadic GElement::evaluate(const Dyadic& x) const {
  BigInt nb = x.floorInt();
  long long n = nb.convert_to<long long>();
  const PLMap& g = unitMap(rho_->contextUnit(n, radius_));
  return Dyadic(nb, 0) + g.evaluate(x - Dyadic(nb, 0));
}

Interval GElement::evaluateInterval(const Interval& I) const {
  return Interval(evaluate(I.lo), evaluate(I.hi));
}

PLMap GElement::assembleAround(const LWord& w, int delta_lo, int delta_hi) const {
  int r = ((int)w.size() - 1) / 2;
  if (r < radius_ + 2 * std::max(std::abs(delta_lo), std::abs(delta_hi)))
    throw std::invalid_argument("assembleAround: word radius too small");
  std::vector<PLMap> pieces;
  for (int d = delta_lo; d <= delta_hi; ++d) {
    LWord sub = w.sub(r + 2 * d - radius_, 2 * radius_ + 1);
    pieces.push_back(unitMap(sub).shiftedBy(Dyadic(d)));
  }
  return PLMap::glue(pieces);
}

PLMap GElement::assembleOnUnits(long long unit_lo, long long unit_hi) const {
  if (unit_lo > unit_hi) throw std::invalid_argument("assembleOnUnits: empty unit range");
  std::vector<PLMap> pieces;
  for (long long n = unit_lo; n <= unit_hi; ++n)
    pieces.push_back(unitMap(rho_->contextUnit(n, radius_)).shiftedBy(Dyadic(BigInt(n), 0)));
  return PLMap::glue(pieces);
}

GElement GElement::thenCompose(const GElement& o) const {
  int K = std::max(radius_, o.radius_ + 2 * shift_bound_);
  const auto& occ = rho_->contextFactors(K);
  std::map<LWord, PLMap> table;
  for (const auto& w : occ.words) {
    PLMap g1 = unitMap(w.central(2 * radius_ + 1));
    PLMap local = o.assembleAround(w, -shift_bound_, shift_bound_);
    table.emplace(w, g1.composeInto(local));
  }
  return GElement(rho_, K, std::move(table)).reduceRadius();
}

GElement GElement::inverse() const {
  int D = shift_bound_ + 1;  // preimages of a unit can spill into neighbours
  int K = radius_ + 2 * D;
  const auto& occ = rho_->contextFactors(K);
  std::map<LWord, PLMap> table;
  for (const auto& w : occ.words) {
    PLMap local = assembleAround(w, -D, D);
    table.emplace(w, local.inverse().restrictTo(Interval(0, 1)));
  }
  return GElement(rho_, K, std::move(table)).reduceRadius();
}

GElement GElement::conjugatedBy(const GElement& h) const {
  return h.inverse().thenCompose(*this).thenCompose(h);
}

GElement GElement::liftToRadius(int K) const {
  if (K < radius_) throw std::invalid_argument("liftToRadius: smaller than current radius");
  if (K == radius_) return *this;
  std::map<LWord, PLMap> table;
  for (const auto& w : rho_->contextFactors(K).words)
    table.emplace(w, unitMap(w.central(2 * radius_ + 1)));
  return GElement(rho_, K, std::move(table));
}

GElement GElement::reduceRadius() const {
  for (int k = 0; k < radius_; ++k) {
    std::map<LWord, PLMap> grouped;
    bool consistent = true;
    for (const auto& [w, g] : table_) {
      LWord c = w.central(2 * k + 1);
      auto it = grouped.find(c);
      if (it == grouped.end())
        grouped.emplace(c, g);
      else if (!(it->second == g)) {
        consistent = false;
        break;
      }
    }
    if (!consistent) continue;
    const auto& occ = rho_->contextFactors(k);
    if (grouped.size() != occ.words.size()) continue;
    return GElement(rho_, k, std::move(grouped));
  }
  return *this;
}

bool GElement::equalsElement(const GElement& o) const {
  int K = std::max(radius_, o.radius_);
  GElement a = liftToRadius(K), b = o.liftToRadius(K);
  return a.table_ == b.table_;
}

SupportSpec GElement::supportSpec() const {
  SupportSpec out;
  for (const auto& [w, g] : table_) {
    auto ivs = g.nonIdentityIntervals();
    if (!ivs.empty()) out.entries.emplace(w, std::move(ivs));
  }
  return out;
}

MembershipReport GElement::membershipCheck() const {
  MembershipReport rep;
  auto fail = [&](const std::string& msg) {
    rep.ok = false;
    rep.failures.push_back(msg);
  };

  // Completeness and per-unit invariants hold by construction; re-verify the
  // table against a fresh enumeration.
  const auto& occ = rho_->contextFactors(radius_);
  for (const auto& w : occ.words)
    if (!table_.count(w)) fail("missing occurring word " + w.str());
  for (const auto& [w, g] : table_) {
    if (!(g.domain() == Interval(0, 1))) fail("bad unit domain at " + w.str());
    for (size_t i = 0; i < g.segmentCount(); ++i) g.log2Slope(i);  // throws if not 2^j
  }

  // Condition 3.b, table form: inverse contexts carry flipped unit maps.
  for (const auto& [w, g] : table_) {
    LWord wi = w.formalInverse();
    auto it = table_.find(wi);
    if (it == table_.end()) {
      fail("inverse context missing for " + w.str());
      continue;
    }
    if (!(it->second == g.flipUnit()))
      fail("flip rule fails at pair (" + w.str() + ", " + wi.str() + ")");
  }

  // Adjacency continuity: consecutive units glue to a homeomorphism.
  const auto& adj = rho_->oddFactors(2 * radius_ + 3, /*b_center=*/false);
  for (const auto& u : adj.words) {
    const PLMap& left = unitMap(u.sub(0, 2 * radius_ + 1));
    const PLMap& right = unitMap(u.sub(2, 2 * radius_ + 1));
    if (!(left.evaluate(Dyadic(1)) - Dyadic(1) == right.evaluate(Dyadic(0))))
      fail("adjacency continuity fails across " + u.str());
  }

  rep.witness_radius = reduceRadius().radius();
  return rep;
}

// ---------------------------------------------------------------------------
// Generators, lambda, special elements

namespace {

PLMap flipOf(const PLMap& f) { return f.flipUnit(); }

// chi_i unit map for a radius-1 context word: the copy on [n-1/2, n+1/2] is
// governed by rho(n), the copy on [n+1/2, n+3/2] by rho(n+1).
PLMap chiUnitMap(const PLMap& nu, char left_a, char right_a) {
  PLMap left_copy = nu.transportTo(Interval(Dyadic(-1, 1), Dyadic(1, 1)), left_a == 'A');
  PLMap right_copy = nu.transportTo(Interval(Dyadic(1, 1), Dyadic(3, 1)), right_a == 'A');
  return PLMap::glue({left_copy.restrictTo(Interval(Dyadic(0), Dyadic(1, 1))),
                      right_copy.restrictTo(Interval(Dyadic(1, 1), Dyadic(1)))});
}

}  // namespace

GElement generatorElement(const GrhoContext& ctx, const GenToken& tok) {
  const PLMap& nu = ctx.nu[tok.gen % 3];
  if (!(nu.domain() == Interval(0, 1)) || !nu.fixesEndpoints())
    throw std::invalid_argument("generator: nu must be a homeomorphism of [0,1]");
  std::map<LWord, PLMap> table;
  if (tok.gen < 3) {
    for (const auto& w : ctx.rho->contextFactors(0).words)
      table.emplace(w, w.at(0) == 'b' ? nu : flipOf(nu));
    GElement z(ctx.rho, 0, std::move(table));
    return tok.inverse ? z.inverse() : z;
  }
  for (const auto& w : ctx.rho->contextFactors(1).words)
    table.emplace(w, chiUnitMap(nu, w.at(0), w.at(2)));
  GElement c(ctx.rho, 1, std::move(table));
  return tok.inverse ? c.inverse() : c;
}

GElement lambdaHom(LabellingPtr rho, const PLMap& f) {
  if (!classify(f).in_H) throw std::invalid_argument("lambdaHom: map is not in H");
  std::map<LWord, PLMap> table;
  for (const auto& w : rho->contextFactors(0).words)
    table.emplace(w, w.at(0) == 'b' ? f : flipOf(f));
  return GElement(std::move(rho), 0, std::move(table));
}

GElement lambdaHom(const GrhoContext& ctx, const PLMap& f) { return lambdaHom(ctx.rho, f); }

GElement specialElement(LabellingPtr rho, const LWord& W, const PLMap& f) {
  if (W.size() % 2 == 0) throw std::invalid_argument("specialElement: |W| must be odd");
  if (!classify(f).in_Fprime) throw std::invalid_argument("specialElement: map is not in F'");
  int l = ((int)W.size() - 1) / 2;
  LWord Winv = W.formalInverse();
  std::map<LWord, PLMap> table;
  for (const auto& w : rho->contextFactors(l).words) {
    if (w == W)
      table.emplace(w, f);
    else if (w == Winv)
      table.emplace(w, flipOf(f));
    else
      table.emplace(w, PLMap::identityOn(Interval(0, 1)));
  }
  return GElement(std::move(rho), l, std::move(table));
}

GElement wordToElement(const GrhoContext& ctx, const std::vector<GenToken>& word) {
  GElement acc = GElement::identityElement(ctx.rho);
  for (const auto& tok : word) acc = acc.thenCompose(generatorElement(ctx, tok));
  return acc;
}

Dyadic evaluateGeneratorDirect(const GrhoContext& ctx, const GenToken& tok, const Dyadic& x) {
  const PLMap& nu = ctx.nu[tok.gen % 3];
  const PLMap use = tok.inverse ? nu.inverse() : nu;
  if (tok.gen < 3) {
    BigInt nb = x.floorInt();
    Dyadic n(nb, 0);
    char c = ctx.rho->letter((nb * 2 + 1).convert_to<long long>());
    if (c == 'b') return n + use.evaluate(x - n);
    return n + Dyadic(1) - use.evaluate(n + Dyadic(1) - x);
  }
  // chi: the tile [m - 1/2, m + 1/2] containing x, governed by rho(m).
  BigInt mb = (x + Dyadic(1, 1)).floorInt();
  Dyadic lo = Dyadic(mb, 0) - Dyadic(1, 1);
  char c = ctx.rho->letter((mb * 2).convert_to<long long>());
  if (c == 'a') return lo + use.evaluate(x - lo);
  Dyadic hi = lo + Dyadic(1);
  return hi - use.evaluate(hi - x);
}

// ---------------------------------------------------------------------------
// Fixed points

namespace {

// Leftmost exact fixed point of g (unit coordinates) within [lo, hi].
// midpoint_runs selects the midpoint of the first identity stretch instead
// of its left endpoint (and ignores isolated fixed points).
std::optional<Dyadic> unitFixedPoint(const PLMap& g, const Dyadic& lo, const Dyadic& hi,
                                     bool midpoint_runs) {
  const auto& nodes = g.nodes();
  for (size_t i = 0; i + 1 < nodes.size(); ++i) {
    Dyadic a = max(nodes[i].x, lo), b = min(nodes[i + 1].x, hi);
    if (!(a <= b)) continue;
    long j = g.log2Slope(i);
    if (j == 0 && nodes[i].x == nodes[i].y) {
      if (midpoint_runs) {
        if (a < b) return (a + b).half();
        continue;
      }
      return a;
    }
    if (j != 0 && !midpoint_runs) {
      // Solve y_i + (s - x_i) 2^j = s exactly when the quotient stays dyadic.
      Dyadic num = nodes[i].y - nodes[i].x.mulPow2(j);
      std::optional<Dyadic> s;
      if (j > 0)
        s = divideByOdd(num, -((BigInt(1) << j) - 1));
      else
        s = divideByOdd(num.mulPow2(-j), (BigInt(1) << (-j)) - 1);
      if (s && *s >= a && *s <= b) return *s;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Dyadic> findFixedPoint(const GElement& e, long long search_radius) {
  for (long long a = 0; a <= search_radius; ++a) {
    for (long long n : {a, -a}) {
      const PLMap& g = e.unitMap(e.labelling()->contextUnit(n, e.radius()));
      auto s = unitFixedPoint(g, Dyadic(0), Dyadic(1), /*midpoint_runs=*/false);
      if (s) return Dyadic(BigInt(n), 0) + *s;
      if (a == 0) break;
    }
  }
  return std::nullopt;
}

std::optional<Dyadic> findFixedPointIn(const GElement& e, const Interval& region) {
  long long lo = region.lo.floorInt().convert_to<long long>();
  long long hi = region.hi.isInteger() ? region.hi.floorInt().convert_to<long long>() - 1
                                       : region.hi.floorInt().convert_to<long long>();
  for (long long n = lo; n <= hi; ++n) {
    Dyadic nd(BigInt(n), 0);
    Dyadic a = max(region.lo - nd, Dyadic(0)), b = min(region.hi - nd, Dyadic(1));
    if (!(a < b)) continue;
    const PLMap& g = e.unitMap(e.labelling()->contextUnit(n, e.radius()));
    auto s = unitFixedPoint(g, a, b, /*midpoint_runs=*/true);
    if (!s) s = unitFixedPoint(g, a, b, /*midpoint_runs=*/false);
    if (s) return nd + *s;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Proximal search

std::optional<std::vector<GenToken>> proximalSearch(const GrhoContext& ctx, const Interval& I,
                                                    const Interval& J, long long budget,
                                                    uint64_t seed) {
  auto inside = [&](const Dyadic& lo, const Dyadic& hi) { return J.lo < lo && hi < J.hi; };
  if (inside(I.lo, I.hi)) return std::vector<GenToken>{};

  struct State {
    Dyadic lo, hi;
    std::vector<GenToken> word;
  };
  auto badness = [&](const State& s) {
    Dyadic d(0);
    if (s.lo <= J.lo) d += J.lo - s.lo + Dyadic(1, 4);
    if (s.hi >= J.hi) d += s.hi - J.hi + Dyadic(1, 4);
    return d + (s.hi - s.lo).mulPow2(-4);
  };

  std::mt19937_64 rng(seed);
  // Deterministic tie-break: score, then word length, then a seeded shuffle
  // of the expansion order baked into insertion sequence.
  std::vector<GenToken> moves;
  for (int g = 0; g < 6; ++g)
    for (bool inv : {false, true}) moves.push_back({g, inv});
  std::shuffle(moves.begin(), moves.end(), rng);

  using Key = std::pair<Dyadic, long long>;
  auto cmp = [](const std::pair<Key, State>& a, const std::pair<Key, State>& b) {
    if (a.first.first != b.first.first) return b.first.first < a.first.first;
    return b.first.second < a.first.second;
  };
  std::priority_queue<std::pair<Key, State>, std::vector<std::pair<Key, State>>, decltype(cmp)>
      open(cmp);
  std::set<std::pair<std::string, std::string>> seen;
  long long ticket = 0;
  State start{I.lo, I.hi, {}};
  open.push({{badness(start), ticket++}, start});

  for (long long steps = 0; steps < budget && !open.empty(); ++steps) {
    State cur = open.top().second;
    open.pop();
    for (const auto& mv : moves) {
      State next;
      next.lo = evaluateGeneratorDirect(ctx, mv, cur.lo);
      next.hi = evaluateGeneratorDirect(ctx, mv, cur.hi);
      next.word = cur.word;
      next.word.push_back(mv);
      if (inside(next.lo, next.hi)) return next.word;
      if (!seen.insert({next.lo.str(), next.hi.str()}).second) continue;
      if (next.word.size() > 64) continue;
      open.push({{badness(next), ticket++}, next});
    }
  }
  return std::nullopt;
}

}  // namespace qpg
