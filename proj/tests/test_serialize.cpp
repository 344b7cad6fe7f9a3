#include <doctest.h>

#include <sstream>

#include "edif/error.hpp"
#include "edif/forcing.hpp"
#include "edif/serialize.hpp"

using namespace edif;

namespace {

const Condition& sample() {
  static const Condition c = [] {
    Condition p = Condition::trivial();
    Rational e(3, 10);
    p = extend_with_target(p, {e, {0, 1}}, GridPool(-4, 4, -12, 0, 2, 1u << 20));
    p = advance(p);
    return advance(p);
  }();
  return c;
}

}  // namespace

TEST_CASE("condition round trip") {
  const Condition& c = sample();
  Json j = condition_to_json(c);
  Condition back = condition_from_json(Json::parse(j.dump()));
  CHECK(back.sigma == c.sigma);
  CHECK(back.N() == c.N());
  CHECK(layers_equal(back.rep, c.rep, c.N()));
  CHECK(back.meta.zeta == c.meta.zeta);
  CHECK(rep_hash(back.rep) == rep_hash(c.rep));
  CHECK(condition_to_json(back).dump() == j.dump());
  for (double x : {-2.0, -0.3, 0.0, 0.7, 1.2, 3.0}) CHECK(back.rep.g_at(x) == c.rep.g_at(x));
  CHECK(validate(back).ok());
}

TEST_CASE("hash is stable and sensitive") {
  const Condition& c = sample();
  std::string h = rep_hash(c.rep);
  CHECK(h.size() == 16);
  CHECK(rep_hash(c.rep) == h);
  CHECK(rep_hash(c.rep.truncated(1)) != h);
  CHECK(rep_hash(FuncRep()) == rep_hash(FuncRep()));
  CHECK(rep_hash(FuncRep()) != rep_hash(FuncRep(1, Rational(1, 4))));
}

TEST_CASE("malformed input") {
  auto kind = [](const std::string& text) {
    try {
      condition_from_json(Json::parse(text));
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::NotClose;
  };
  CHECK(kind("{}") == ErrorKind::InvalidInput);
  CHECK(kind(R"({"sigma": [], "layers": {"base": {"kappa": "1", "constant": "0"}, "psi": [[]], "theta": []}})") ==
        ErrorKind::InvalidInput);
  CHECK(kind(R"({"sigma": [{"d": {"v": 0.5, "h": [0, 0]}, "e": {"v": "0", "h": [0, 0]}}],
                 "layers": {"base": {"kappa": "1", "constant": "0"}, "psi": [], "theta": []}})") == ErrorKind::InvalidInput);
  CHECK(kind(R"({"sigma": [], "N": 2, "layers": {"base": {"kappa": "1", "constant": "0"}, "psi": [], "theta": []}})") ==
        ErrorKind::InvalidInput);
}

TEST_CASE("pools and targets") {
  GridPool g(-1, 1, -3, 4, 2, 5);
  auto back = pool_from_json(pool_to_json(g));
  CHECK(back->size() == 17);
  CHECK(back->contains(g.at(3)));
  ListPool l({{Rational(1, 2), {0, 2}}, {Rational(-1, 4), {0, 3}}});
  CHECK(pool_from_json(pool_to_json(l))->size() == 2);
  auto ts = targets_from_json(Json::parse(R"({"targets": [{"v": "1/3", "h": [0, 1]}, {"v": "-2/5", "h": [0, 1]}]})"));
  REQUIRE(ts.size() == 2);
  CHECK(ts[0].v == Rational(1, 3));
  CHECK(targets_from_json(Json::parse(R"([{"v": "1", "h": [0, 1]}])")).size() == 1);
  CHECK_THROWS_AS(pool_from_json(Json::parse(R"({"type": "cloud"})")), Error);
}

TEST_CASE("samples csv") {
  const Condition& c = sample();
  std::vector<Rational> xs;
  for (int i = -5; i <= 5; ++i) xs.emplace_back(i, 4);
  std::ostringstream os;
  write_samples_csv(os, c.rep, xs, 42);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "# rep_hash=" + rep_hash(c.rep) + " seed=42 stages=" + std::to_string(c.N()));
  std::getline(in, line);
  CHECK(line == "x,g,f,errBound");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 3);
  }
  CHECK(rows == 11);
  std::ostringstream again;
  write_samples_csv(again, c.rep, xs, 42);
  CHECK(again.str() == os.str());
}
