#include "qpg/plmap.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace qpg {

namespace {

// log2 of dy/dx; throws unless the ratio is a power of two.
long log2Ratio(const Dyadic& dy, const Dyadic& dx) {
  auto [uy, vy] = dy.oddSplit();
  auto [ux, vx] = dx.oddSplit();
  if (uy != ux) throw std::invalid_argument("PLMap: segment slope is not a power of 2");
  return vy - vx;
}

bool isPow2Ratio(const Dyadic& dy, const Dyadic& dx) {
  return dy.oddSplit().first == dx.oddSplit().first;
}

}  // namespace

PLMap::PLMap(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) throw std::invalid_argument("PLMap: needs at least two nodes");
  for (size_t i = 0; i + 1 < nodes_.size(); ++i) {
    if (!(nodes_[i].x < nodes_[i + 1].x) || !(nodes_[i].y < nodes_[i + 1].y))
      throw std::invalid_argument("PLMap: nodes must be strictly increasing");
    log2Ratio(nodes_[i + 1].y - nodes_[i].y, nodes_[i + 1].x - nodes_[i].x);
  }
  // Merge collinear interior nodes (equal adjacent slopes).
  std::vector<Node> out;
  out.push_back(nodes_.front());
  for (size_t i = 1; i + 1 < nodes_.size(); ++i) {
    long left = log2Ratio(nodes_[i].y - out.back().y, nodes_[i].x - out.back().x);
    long right = log2Ratio(nodes_[i + 1].y - nodes_[i].y, nodes_[i + 1].x - nodes_[i].x);
    if (left != right) out.push_back(nodes_[i]);
  }
  out.push_back(nodes_.back());
  nodes_ = std::move(out);
}

PLMap PLMap::identityOn(const Interval& d) {
  return PLMap({{d.lo, d.lo}, {d.hi, d.hi}});
}

bool PLMap::isIdentity() const {
  return nodes_.size() == 2 && nodes_[0].x == nodes_[0].y && nodes_[1].x == nodes_[1].y;
}

long PLMap::log2Slope(size_t i) const {
  return log2Ratio(nodes_[i + 1].y - nodes_[i].y, nodes_[i + 1].x - nodes_[i].x);
}

size_t PLMap::segmentIndexFor(const Dyadic& x) const {
  if (x < nodes_.front().x || nodes_.back().x < x)
    throw std::domain_error("PLMap: " + x.str() + " outside domain " + domain().str());
  // last segment whose left node is <= x
  size_t lo = 0, hi = nodes_.size() - 2;
  while (lo < hi) {
    size_t mid = (lo + hi + 1) / 2;
    if (nodes_[mid].x <= x)
      lo = mid;
    else
      hi = mid - 1;
  }
  return lo;
}

Dyadic PLMap::evaluate(const Dyadic& x) const {
  size_t i = segmentIndexFor(x);
  return nodes_[i].y + (x - nodes_[i].x).mulPow2(log2Slope(i));
}

Dyadic PLMap::evaluateInverse(const Dyadic& y) const {
  if (y < nodes_.front().y || nodes_.back().y < y)
    throw std::domain_error("PLMap: " + y.str() + " outside range " + range().str());
  size_t lo = 0, hi = nodes_.size() - 2;
  while (lo < hi) {
    size_t mid = (lo + hi + 1) / 2;
    if (nodes_[mid].y <= y)
      lo = mid;
    else
      hi = mid - 1;
  }
  return nodes_[lo].x + (y - nodes_[lo].y).mulPow2(-log2Slope(lo));
}

PLMap PLMap::composeInto(const PLMap& g) const {
  Interval r = range();
  if (!(g.domain().contains(r)))
    throw std::invalid_argument("PLMap compose: range " + r.str() +
                                " not within domain " + g.domain().str());
  std::set<Dyadic> cuts;
  for (const Node& n : nodes_) cuts.insert(n.x);
  for (const Node& n : g.nodes())
    if (r.containsStrictly(n.x)) cuts.insert(evaluateInverse(n.x));
  std::vector<Node> out;
  out.reserve(cuts.size());
  for (const Dyadic& x : cuts) out.push_back({x, g.evaluate(evaluate(x))});
  return PLMap(std::move(out));
}

PLMap PLMap::thenCompose(const PLMap& g) const {
  if (!(range() == g.domain()))
    throw std::invalid_argument("PLMap then_compose: range " + range().str() +
                                " != domain " + g.domain().str());
  return composeInto(g);
}

PLMap PLMap::inverse() const {
  std::vector<Node> out;
  out.reserve(nodes_.size());
  for (const Node& n : nodes_) out.push_back({n.y, n.x});
  return PLMap(std::move(out));
}

PLMap PLMap::restrictTo(const Interval& sub) const {
  if (!domain().contains(sub))
    throw std::invalid_argument("PLMap restrict: " + sub.str() + " outside " + domain().str());
  std::vector<Node> out;
  out.push_back({sub.lo, evaluate(sub.lo)});
  for (const Node& n : nodes_)
    if (sub.containsStrictly(n.x)) out.push_back(n);
  out.push_back({sub.hi, evaluate(sub.hi)});
  return PLMap(std::move(out));
}

PLMap PLMap::shiftedBy(const Dyadic& s) const {
  std::vector<Node> out;
  out.reserve(nodes_.size());
  for (const Node& n : nodes_) out.push_back({n.x + s, n.y + s});
  return PLMap(std::move(out));
}

PLMap PLMap::scaledByInteger(const BigInt& s) const {
  if (s < 1) throw std::invalid_argument("PLMap scale: factor must be >= 1");
  Dyadic f(s, 0);
  std::vector<Node> out;
  out.reserve(nodes_.size());
  for (const Node& n : nodes_) out.push_back({n.x * f, n.y * f});
  return PLMap(std::move(out));
}

PLMap PLMap::transportTo(const Interval& target, bool reverse) const {
  Interval d = domain();
  if (d.length() != target.length())
    throw std::invalid_argument("PLMap transport: length mismatch");
  std::vector<Node> out;
  out.reserve(nodes_.size());
  if (!reverse) {
    Dyadic s = target.lo - d.lo;
    for (const Node& n : nodes_) out.push_back({n.x + s, n.y + s});
  } else {
    Dyadic c = d.hi + target.lo;  // reflection x -> c - x maps domain onto target
    for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it)
      out.push_back({c - it->x, c - it->y});
  }
  return PLMap(std::move(out));
}

PLMap PLMap::flipUnit() const {
  if (!(domain() == Interval(0, 1)))
    throw std::invalid_argument("PLMap flipUnit: domain must be [0,1]");
  std::vector<Node> out;
  out.reserve(nodes_.size());
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it)
    out.push_back({Dyadic(1) - it->x, Dyadic(1) - it->y});
  return PLMap(std::move(out));
}

std::array<std::optional<long>, 2> PLMap::germ(const Dyadic& x) const {
  if (x < nodes_.front().x || nodes_.back().x < x)
    throw std::domain_error("PLMap germ: point outside domain");
  std::array<std::optional<long>, 2> out{std::nullopt, std::nullopt};
  if (nodes_.front().x < x) {
    size_t i = segmentIndexFor(x);
    if (nodes_[i].x == x) --i;  // left side of an interior node
    out[0] = log2Slope(i);
  }
  if (x < nodes_.back().x) out[1] = log2Slope(segmentIndexFor(x));
  return out;
}

std::vector<Interval> PLMap::nonIdentityIntervals() const {
  std::vector<Interval> out;
  std::optional<size_t> start;
  for (size_t i = 0; i + 1 < nodes_.size(); ++i) {
    bool ident = log2Slope(i) == 0 && nodes_[i].x == nodes_[i].y;
    if (!ident && !start) start = i;
    if (ident && start) {
      out.emplace_back(nodes_[*start].x, nodes_[i].x);
      start.reset();
    }
  }
  if (start) out.emplace_back(nodes_[*start].x, nodes_.back().x);
  return out;
}

PLMap PLMap::glue(const std::vector<PLMap>& pieces) {
  if (pieces.empty()) throw std::invalid_argument("PLMap glue: no pieces");
  std::vector<Node> out = pieces.front().nodes();
  for (size_t i = 1; i < pieces.size(); ++i) {
    const auto& ns = pieces[i].nodes();
    if (!(out.back() == ns.front()))
      throw std::invalid_argument("PLMap glue: pieces do not chain at " + out.back().x.str());
    out.insert(out.end(), ns.begin() + 1, ns.end());
  }
  return PLMap(std::move(out));
}

std::string PLMap::str() const {
  std::ostringstream os;
  os << "{";
  for (size_t i = 0; i < nodes_.size(); ++i)
    os << (i ? ", " : "") << "(" << nodes_[i].x.str() << ", " << nodes_[i].y.str() << ")";
  os << "}";
  return os.str();
}

ClassifyFlags classify(const PLMap& f) {
  if (!(f.domain() == Interval(0, 1)) || !f.fixesEndpoints())
    throw std::invalid_argument("classify: expects a map of [0,1] fixing 0 and 1");
  ClassifyFlags flags;
  flags.in_F = true;  // enforced by the type invariants
  flags.in_H = f.log2Slope(0) == f.log2Slope(f.segmentCount() - 1);
  auto identSeg = [&](size_t i) {
    return f.log2Slope(i) == 0 && f.nodes()[i].x == f.nodes()[i].y;
  };
  flags.in_Fprime = identSeg(0) && identSeg(f.segmentCount() - 1);
  return flags;
}

Dyadic simplestInteriorDyadic(const Dyadic& a, const Dyadic& b) {
  if (!(a < b)) throw std::invalid_argument("simplestInteriorDyadic: empty interval");
  for (long e = 0;; ++e) {
    Dyadic ta = a.mulPow2(e), tb = b.mulPow2(e);
    BigInt lo = ta.floorInt() + 1;
    BigInt hi = tb.isInteger() ? tb.floorInt() - 1 : tb.floorInt();
    if (lo <= hi) {
      // e >= 1 admits exactly one candidate; several integers can qualify at
      // e == 0, where the one of least magnitude (positive on ties) is taken.
      if (lo != hi && e > 0)
        throw std::logic_error("simplestInteriorDyadic: non-unique candidate");
      BigInt m = lo > 0 ? lo : (hi < 0 ? hi : BigInt(0));
      return Dyadic(m, e);
    }
  }
}

namespace {

void interpolateInto(const Dyadic& a, const Dyadic& b, const Dyadic& c, const Dyadic& d,
                     std::vector<PLMap::Node>& out) {
  if (isPow2Ratio(d - c, b - a)) {
    out.push_back({b, d});
    return;
  }
  Dyadic ms = simplestInteriorDyadic(a, b);
  Dyadic md = simplestInteriorDyadic(c, d);
  interpolateInto(a, ms, c, md, out);
  interpolateInto(ms, b, md, d, out);
}

}  // namespace

PLMap dyadicInterpolate(const Interval& src, const Interval& dst) {
  std::vector<PLMap::Node> nodes{{src.lo, dst.lo}};
  interpolateInto(src.lo, src.hi, dst.lo, dst.hi, nodes);
  return PLMap(std::move(nodes));
}

PLMap extendToHomeo(const PLMap& partial, const Interval& frame) {
  Interval src = partial.domain(), dst = partial.range();
  if (!frame.containsStrictly(src) || !frame.containsStrictly(dst))
    throw std::invalid_argument("extendToHomeo: frame must strictly contain both sides");
  PLMap left = dyadicInterpolate(Interval(frame.lo, src.lo), Interval(frame.lo, dst.lo));
  PLMap right = dyadicInterpolate(Interval(src.hi, frame.hi), Interval(dst.hi, frame.hi));
  return PLMap::glue({left, partial, right});
}

PLMap extendByIdentity(const PLMap& f, const Interval& box) {
  if (!f.fixesEndpoints())
    throw std::invalid_argument("extendByIdentity: map must fix its endpoints");
  std::vector<PLMap> pieces;
  if (box.lo < f.domain().lo) pieces.push_back(PLMap::identityOn(Interval(box.lo, f.domain().lo)));
  pieces.push_back(f);
  if (f.domain().hi < box.hi) pieces.push_back(PLMap::identityOn(Interval(f.domain().hi, box.hi)));
  return PLMap::glue(pieces);
}

PLMap thompsonX(int n) {
  if (n < 0) throw std::invalid_argument("thompsonX: n >= 0");
  PLMap x0({{Dyadic(0), Dyadic(0)},
            {Dyadic(1, 1), Dyadic(1, 2)},
            {Dyadic(3, 2), Dyadic(1, 1)},
            {Dyadic(1), Dyadic(1)}});
  if (n == 0) return x0;
  // Identity up to 1 - 2^-n, then a 2^-n-scale copy of x0.
  Dyadic cut = Dyadic(1) - Dyadic(1, n);
  std::vector<PLMap::Node> scaled;
  for (const auto& nd : x0.nodes())
    scaled.push_back({cut + nd.x.mulPow2(-n), cut + nd.y.mulPow2(-n)});
  return PLMap::glue({PLMap::identityOn(Interval(0, cut)), PLMap(std::move(scaled))});
}

std::array<PLMap, 3> defaultHGenerators() {
  PLMap x0 = thompsonX(0), x1 = thompsonX(1), x2 = thompsonX(2), x3 = thompsonX(3);
  PLMap nu1 = x0.thenCompose(x1.inverse()).thenCompose(x1.inverse());
  PLMap nu2 = x1.thenCompose(x2.inverse());
  PLMap nu3 = x2.thenCompose(x3.inverse());
  return {nu1, nu2, nu3};
}

}  // namespace qpg
