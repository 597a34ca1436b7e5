#include "qpg/plmap.hpp"

#include <random>

#include "doctest.h"

using namespace qpg;

namespace {

Dyadic d(const char* s) { return Dyadic::parse(s); }

PLMap x0() { return thompsonX(0); }

// Random element of F as a product of x0..x3 and inverses.
PLMap randomF(std::mt19937_64& rng, int len) {
  PLMap acc = PLMap::identityOn(Interval(0, 1));
  for (int i = 0; i < len; ++i) {
    PLMap g = thompsonX((int)(rng() % 4));
    acc = acc.thenCompose(rng() % 2 ? g : g.inverse());
  }
  return acc;
}

Dyadic randomIn01(std::mt19937_64& rng, int exp = 10) {
  return Dyadic(BigInt(rng() % ((1ull << exp) + 1)), exp);
}

}  // namespace

TEST_CASE("node canonicalization merges collinear segments") {
  PLMap f({{d("0"), d("0")}, {d("1/2"), d("1/2")}, {d("1"), d("1")}});
  CHECK(f.nodes().size() == 2);
  CHECK(f.isIdentity());
  CHECK_THROWS_AS(PLMap({{d("0"), d("0")}, {d("1/2"), d("3/8")}}),
                  std::invalid_argument);  // slope 3/4
  CHECK_THROWS_AS(PLMap({{d("0"), d("0")}, {d("1/2"), d("1/4")}, {d("1/4"), d("1")}}),
                  std::invalid_argument);  // x not increasing
}

TEST_CASE("evaluate") {
  CHECK(PLMap::identityOn(Interval(0, 1)).evaluate(d("1/2")) == d("1/2"));
  CHECK(x0().evaluate(d("1/2")) == d("1/4"));
  CHECK(x0().evaluate(d("1")) == d("1"));
  CHECK(x0().evaluate(d("3/4")) == d("1/2"));
  CHECK_THROWS_AS(x0().evaluate(d("2")), std::domain_error);
}

TEST_CASE("then_compose") {
  PLMap f = x0();
  CHECK(f.thenCompose(PLMap::identityOn(Interval(0, 1))) == f);
  CHECK(f.thenCompose(f.inverse()).isIdentity());
  // Oracle: pointwise evaluation. (3/4)x0 = 1/2, (1/2)x0 = 1/4.
  PLMap ff = f.thenCompose(f);
  CHECK(ff.evaluate(d("3/4")) == d("1/4"));
  std::mt19937_64 rng(17);
  for (int i = 0; i < 50; ++i) {
    PLMap a = randomF(rng, 4), b = randomF(rng, 4);
    PLMap c = a.thenCompose(b);
    CHECK(c.nodes().size() <= a.nodes().size() + b.nodes().size());
    for (int k = 0; k < 20; ++k) {
      Dyadic x = randomIn01(rng);
      CHECK(c.evaluate(x) == b.evaluate(a.evaluate(x)));
    }
  }
}

TEST_CASE("invert") {
  CHECK(PLMap::identityOn(Interval(0, 1)).inverse().isIdentity());
  PLMap xi = x0().inverse();
  REQUIRE(xi.segmentCount() == 3);
  CHECK(xi.log2Slope(0) == 1);
  CHECK(xi.log2Slope(1) == 0);
  CHECK(xi.log2Slope(2) == -1);
  std::mt19937_64 rng(23);
  for (int i = 0; i < 100; ++i) {
    PLMap f = randomF(rng, 5);
    CHECK(f.inverse().inverse() == f);
    CHECK(f.thenCompose(f.inverse()).isIdentity());
  }
}

TEST_CASE("group laws on samples") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 50; ++i) {
    PLMap a = randomF(rng, 3), b = randomF(rng, 3), c = randomF(rng, 3);
    CHECK(a.thenCompose(b).thenCompose(c) == a.thenCompose(b.thenCompose(c)));
  }
}

TEST_CASE("classify") {
  auto id_flags = classify(PLMap::identityOn(Interval(0, 1)));
  CHECK(id_flags.in_F);
  CHECK(id_flags.in_H);
  CHECK(id_flags.in_Fprime);

  auto x0_flags = classify(x0());
  CHECK(x0_flags.in_F);
  CHECK(!x0_flags.in_H);  // slopes 1/2 vs 2
  CHECK(!x0_flags.in_Fprime);

  auto nus = defaultHGenerators();
  auto nu1_flags = classify(nus[0]);
  CHECK(nu1_flags.in_F);
  CHECK(nu1_flags.in_H);
  CHECK(!nu1_flags.in_Fprime);
  CHECK(nus[0].germ(d("0"))[1] == -1);
  CHECK(nus[0].germ(d("1"))[0] == -1);

  // consistency: in_Fprime => in_H => in_F on random F' bumps
  PLMap bump({{d("0"), d("0")},
              {d("1/4"), d("1/4")},
              {d("3/8"), d("1/2")},
              {d("1/2"), d("5/8")},
              {d("3/4"), d("3/4")},
              {d("1"), d("1")}});
  auto bf = classify(bump);
  CHECK(bf.in_Fprime);
  CHECK(bf.in_H);
}

TEST_CASE("germ") {
  auto g = PLMap::identityOn(Interval(0, 1)).germ(d("1/2"));
  CHECK(*g[0] == 0);
  CHECK(*g[1] == 0);
  auto at0 = x0().germ(d("0"));
  CHECK(!at0[0].has_value());
  CHECK(*at0[1] == -1);
  auto at1 = x0().germ(d("1"));
  CHECK(*at1[0] == 1);
  CHECK(!at1[1].has_value());

  // additivity at a common fixed point (chain rule)
  std::mt19937_64 rng(31);
  for (int i = 0; i < 50; ++i) {
    PLMap a = randomF(rng, 4), b = randomF(rng, 4);
    PLMap c = a.thenCompose(b);
    auto ga = a.germ(d("0")), gb = b.germ(d("0")), gc = c.germ(d("0"));
    CHECK(*gc[1] == *ga[1] + *gb[1]);
  }
}

TEST_CASE("transport") {
  PLMap id34 = PLMap::identityOn(Interval(0, 1)).transportTo(Interval(3, 4), false);
  CHECK(id34 == PLMap::identityOn(Interval(3, 4)));
  CHECK(x0().transportTo(Interval(0, 1), false) == x0());
  PLMap rev = x0().transportTo(Interval(0, 1), true);
  CHECK(rev.evaluate(d("1/4")) == d("1/2"));  // 1 - x0(3/4)
  CHECK(rev == x0().flipUnit());
  // endpoints fixed iff the source fixes endpoints
  PLMap moved = x0().transportTo(Interval(5, 6), true);
  CHECK(moved.fixesEndpoints());
}

TEST_CASE("simplest interior dyadic") {
  CHECK(simplestInteriorDyadic(d("0"), d("3/8")) == d("1/4"));
  CHECK(simplestInteriorDyadic(d("0"), d("1/4")) == d("1/8"));
  CHECK(simplestInteriorDyadic(d("1/8"), d("1/4")) == d("3/16"));
  CHECK(simplestInteriorDyadic(d("-1"), d("1")) == d("0"));
  CHECK(simplestInteriorDyadic(d("3/16"), d("1/4")) == d("7/32"));
}

TEST_CASE("dyadic interpolate") {
  CHECK(dyadicInterpolate(Interval(0, 1), Interval(0, 1)).isIdentity());
  PLMap two(dyadicInterpolate(Interval(d("0"), d("1/4")), Interval(d("0"), d("1/2"))));
  CHECK(two.segmentCount() == 1);
  CHECK(two.log2Slope(0) == 1);
  PLMap g = dyadicInterpolate(Interval(d("0"), d("3/8")), Interval(d("0"), d("1/4")));
  REQUIRE(g.segmentCount() == 2);
  CHECK(g.nodes()[1].x == d("1/4"));
  CHECK(g.nodes()[1].y == d("1/8"));
  CHECK(g.log2Slope(0) == -1);
  CHECK(g.log2Slope(1) == 0);

  std::mt19937_64 rng(37);
  for (int i = 0; i < 1000; ++i) {
    auto r = [&](int bits) {
      return Dyadic(BigInt((long long)(rng() % (1ull << bits)) - (1ll << (bits - 1))),
                    (long)(rng() % 6));
    };
    Dyadic a = r(10), c = r(10);
    Dyadic b = a + Dyadic(BigInt(1 + rng() % 64), (long)(rng() % 5));
    Dyadic dd = c + Dyadic(BigInt(1 + rng() % 64), (long)(rng() % 5));
    PLMap m = dyadicInterpolate(Interval(a, b), Interval(c, dd));
    CHECK(m.domain() == Interval(a, b));
    CHECK(m.range() == Interval(c, dd));  // strict monotonicity and p2 slopes are type invariants
  }
}

TEST_CASE("extend to homeo") {
  PLMap idp = PLMap::identityOn(Interval(d("1/4"), d("1/2")));
  CHECK(extendToHomeo(idp, Interval(0, 1)).isIdentity());

  PLMap partial({{d("1/4"), d("1/4")}, {d("3/8"), d("1/2")}});
  PLMap ext = extendToHomeo(partial, Interval(0, 1));
  CHECK(ext.evaluate(d("0")) == d("0"));
  CHECK(ext.evaluate(d("1")) == d("1"));
  CHECK(ext.evaluate(d("1/4")) == d("1/4"));
  CHECK(ext.evaluate(d("5/16")) == d("3/8"));
  CHECK(ext.evaluate(d("3/8")) == d("1/2"));
  CHECK(classify(ext).in_F);
  // identity only outside the filled region
  CHECK_THROWS_AS(extendToHomeo(partial, Interval(d("1/4"), d("1"))), std::invalid_argument);
}

TEST_CASE("thompson generators satisfy the basic relations") {
  // with composition read left to right, x_{n+1} = x0 x_n x0^-1 for n >= 1
  for (int n = 1; n <= 2; ++n) {
    PLMap lhs = thompsonX(0).thenCompose(thompsonX(n)).thenCompose(thompsonX(0).inverse());
    CHECK(lhs == thompsonX(n + 1));
  }
}
