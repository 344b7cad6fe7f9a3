#include <doctest.h>

#include <cmath>
#include <random>

#include "edif/error.hpp"
#include "edif/forcing.hpp"
#include "edif/serialize.hpp"

using namespace edif;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidInput;
}

Rational frac(long a, long b) {
  Rational r(a, b);
  r.canonicalize();
  return r;
}

LabeledPoint pt(const Rational& v, std::uint64_t limit, std::uint64_t offset) { return {v, {limit, offset}}; }

Condition with_pair(const Rational& d, const Rational& e, std::uint64_t dh = 2) {
  Condition c = Condition::trivial();
  c.sigma.push_back({pt(d, 0, dh), pt(e, 0, 1)});
  c.sort_sigma();
  return c;
}

// x - atan x = e by Newton from the right.
double base_root(double e) {
  double x = 2.0;
  for (int i = 0; i < 100; ++i) x -= (x - std::atan(x) - e) / (x * x / (x * x + 1));
  return x;
}

}  // namespace

TEST_CASE("validation of small conditions") {
  CHECK(validate(Condition::trivial()).ok());
  ClauseReport good = validate(with_pair(1, frac(3, 10)));
  CHECK(good.ok());
  ClauseReport bad = validate(with_pair(1, frac(9, 10)));
  CHECK_FALSE(bad.ok());
  bool p13_failed = false;
  for (const auto& c : bad.clauses) p13_failed |= c.clause == "P13" && c.status == ClauseStatus::Fail;
  CHECK(p13_failed);

  Condition flat_heights = with_pair(1, frac(3, 10));
  flat_heights.sigma[1].d.h = {0, 1};
  CHECK(validate(flat_heights).first_failure().rfind("P3", 0) == 0);
  Condition reversed = Condition::trivial();
  reversed.sigma.push_back({pt(1, 0, 2), pt(-1, 0, 1)});
  CHECK(validate(reversed).first_failure().rfind("P2", 0) == 0);
}

TEST_CASE("order") {
  Condition one = Condition::trivial();
  CHECK(leq(one, one).ok());
  Condition a = advance(one);
  CHECK(leq(a, a).ok());
  CHECK(leq(a, one).ok());
  Condition b = advance(a);
  CHECK(leq(b, a).ok());
  CHECK(leq(b, one).ok());
  CHECK_FALSE(leq(one, a).ok());

  Condition wrong = a;
  Layer L = a.rep.layers()[0];
  L.eps /= 2;
  wrong.rep = FuncRep().with_layer(L);
  ClauseReport r = leq(wrong, a);
  CHECK_FALSE(r.ok());
  CHECK(r.first_failure().rfind("Q2", 0) == 0);
}

TEST_CASE("zeta ledger") {
  Condition one = Condition::trivial();
  CHECK_FALSE(mu(one));
  // The 2L entry with L = 1 gives 2^-40, below the 2^-16 cap.
  CHECK(compute_zeta(one) == pow2(-40));
  CHECK(zeta_ledger(one, pow2(-40)).ok());
  CHECK_FALSE(zeta_ledger(one, pow2(-39)).ok());

  Condition two = with_pair(1, frac(3, 10));
  Rational z = compute_zeta(two);
  // 4 zeta^{1/8} <= 2^-4 gives zeta <= 2^-48.
  CHECK(z <= pow2(-48));
  CHECK(z < *mu(two) / 2);
  CHECK(zeta_ledger(two, z).ok());
  CHECK(z == pow2(floor_log2(z)));
}

TEST_CASE("zeta closeness") {
  Condition p = with_pair(1, frac(3, 10));
  Rational z = compute_zeta(p);
  CHECK(zeta_close(p, p, z).ok);

  Condition q = with_pair(1 + z / 4, frac(3, 10) + z * z / 8, 5);
  q.sigma[1].e.h = {0, 3};
  REQUIRE(compute_zeta(q) == z);
  CloseReport c = zeta_close(p, q, z);
  CHECK_MESSAGE(c.ok, c.reason);

  Condition neg = with_pair(1 + z / 4, frac(3, 10) - z * z / 8, 5);
  CHECK_FALSE(zeta_close(p, neg, z).ok);
  Condition same_height = with_pair(1 + z / 4, frac(3, 10) + z * z / 8, 2);
  CHECK_FALSE(zeta_close(p, same_height, z).ok);
  CHECK_FALSE(zeta_close(p, Condition::trivial(), z).ok);
  CHECK_FALSE(zeta_close(p, p, z / 2).ok);

  Condition s = amalgamate(p, q, z);
  CHECK(s.sigma.size() == 3);
  CHECK(s.N() == 1);
  CHECK(validate(s).ok());
  CHECK(leq(s, p).ok());
  CHECK(leq(s, q).ok());
  CHECK(kind_of([&] { amalgamate(p, Condition::trivial(), z); }) == ErrorKind::NotClose);
}

TEST_CASE("amalgamation of small conditions") {
  Condition s = advance(Condition::trivial());
  CHECK(s.N() == 1);
  CHECK(validate(s).ok());
  CHECK(s.rep.g(Rational(0)).value == 0);
  for (int i = 1; i <= 400; ++i) {
    double x = std::ldexp(1.0, -i / 8) * (i % 2 ? 1 : -1) * (1 + (i % 7) / 8.0);
    CHECK(s.rep.g_at(x) > 0);
  }

  Condition p = with_pair(1, frac(3, 10));
  Condition t = advance(p);
  CHECK(validate(t).ok());
  double g1 = t.rep.g(Rational(1)).value;
  CHECK(g1 > 0);
  CHECK(g1 < 0.5);
  CHECK(leq(t, p).ok());
}

TEST_CASE("advance chain") {
  Condition c = Condition::trivial();
  for (std::size_t k = 1; k <= 6; ++k) {
    c = advance(c);
    CHECK(c.N() == k);
    CHECK(c.rep.layers().size() == k);
  }
  CHECK(validate(c).ok());
  CHECK(c.rep.sup_norm_bound() < 2 - pow2(-6));

  ConstructionResult r = run_construction(GridPool(-4, 4, -12, 0, 2, 1u << 20), nullptr, {}, 6);
  CHECK(rep_hash(r.condition.rep) == rep_hash(c.rep));
  CHECK(r.zetas.size() == 6);
  CHECK(r.targets_used == 0);
}

TEST_CASE("target extension") {
  Condition one = Condition::trivial();
  GridPool grid(-4, 4, -12, 0, 2, 1u << 20);
  Rational root = target_root(one, frac(3, 10));
  CHECK(to_double(root) == doctest::Approx(base_root(0.3)).epsilon(1e-12));

  Condition q = extend_with_target(one, pt(frac(3, 10), 0, 1), grid);
  REQUIRE(q.sigma.size() == 2);
  CHECK(validate(q).ok());
  CHECK(leq(q, one).ok());
  CHECK(std::fabs(to_double(q.sigma[1].d.v) - base_root(0.3)) < 0.05);
  CHECK(grid.contains(q.sigma[1].d));

  CHECK(kind_of([&] { extend_with_target(one, pt(0, 0, 1), grid); }) == ErrorKind::PreconditionViolated);
  ListPool empty({});
  CHECK(kind_of([&] { extend_with_target(one, pt(frac(3, 10), 0, 1), empty); }) == ErrorKind::NoAdmissiblePoint);
  // Every candidate sits in another limit block.
  GridPool elsewhere(-4, 4, -12, 5, 2, 1u << 20);
  CHECK(kind_of([&] { extend_with_target(one, pt(frac(3, 10), 0, 1), elsewhere); }) == ErrorKind::HeightConflict);
  // f grows at most like 2|x|, so 100 is out of reach from [-4, 4].
  CHECK(kind_of([&] { extend_with_target(one, pt(100, 0, 1), grid); }) == ErrorKind::NoAdmissiblePoint);
}

TEST_CASE("compatible tuples") {
  Threshold id = [](const Rational& t) { return t; };
  CHECK(compatible({{0, 0}}, {{1, frac(1, 2)}}, id));
  CHECK_FALSE(compatible({{0, 0}}, {{1, frac(-1, 2)}}, id));
  CHECK_FALSE(compatible({{0, 0}, {2, 2}}, {{1, frac(1, 2)}, {3, 1}}, id));
  CHECK(kind_of([&] { compatible({{1, 0}}, {{1, 1}}, id); }) == ErrorKind::DivisionByZero);

  // Exhaustive demo with phi(t) = t^2 against a direct arithmetic oracle.
  Threshold sq = [](const Rational& t) { return t * t; };
  std::mt19937_64 rng(50);
  std::vector<PairList> tuples;
  for (int k = 0; k < 50; ++k) {
    PairList t;
    for (int i = 0; i < 3; ++i) t.emplace_back(frac(static_cast<long>(rng() % 4000), 1000), frac(static_cast<long>(rng() % 4000), 1000));
    tuples.push_back(t);
  }
  std::size_t found = 0;
  for (std::size_t a = 0; a < tuples.size(); ++a)
    for (std::size_t b = 0; b < tuples.size(); ++b) {
      if (a == b) continue;
      bool distinct = true, expect = true;
      for (std::size_t i = 0; i < 3; ++i) {
        Rational dd = tuples[b][i].first - tuples[a][i].first, de = tuples[b][i].second - tuples[a][i].second;
        if (sgn(dd) == 0) {
          distinct = false;
          break;
        }
        if (!(sgn(dd) == sgn(de) && sgn(de) != 0 && abs(de) < dd * dd)) expect = false;
      }
      if (!distinct) continue;
      bool got = compatible(tuples[a], tuples[b], sq);
      CHECK(got == expect);
      found += got;
    }
  MESSAGE("compatible ordered pairs among 50 tuples: " << found);
}
