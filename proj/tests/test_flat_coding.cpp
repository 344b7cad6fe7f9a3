#include <doctest.h>

#include <random>

#include "edif/error.hpp"
#include "edif/flat_coding.hpp"

using namespace edif;

namespace {

// Direct reading of the coding rule: digit n of z sits in block k at offset j
// and copies digit phi(i, j) of x's block k - 2 (zero when out of range).
TernaryPoint oracle_encode(std::uint64_t i, const DigitWord& s, const TernaryPoint& x, const std::vector<std::uint64_t>& G,
                           std::size_t depth) {
  DigitWord z(depth, 0);
  for (std::size_t n = 0; n < depth; ++n) {
    if (n < s.size()) {
      z[n] = s[n];
      continue;
    }
    std::size_t k = 0;
    while (G[k + 1] <= n) ++k;
    std::uint64_t j = n - G[k];
    if (k < 2) continue;
    std::uint64_t m = std::max(i, j);
    std::uint64_t phi = m * m + (j == m ? i : 2 * m - j);
    if (phi < G[k - 1] - G[k - 2]) z[n] = x[G[k - 2] + phi];
  }
  return TernaryPoint(z);
}

TernaryPoint random_word(std::mt19937_64& rng, std::size_t depth) {
  DigitWord w(depth);
  for (auto& d : w) d = (rng() & 1) ? 2 : 0;
  return TernaryPoint(w);
}

const std::vector<std::uint64_t> kMinimal{0, 1, 2, 4, 16, 256, 65536};

}  // namespace

TEST_CASE("encode matches the coding rule") {
  BlockSchedule g = BlockSchedule::minimal();
  std::mt19937_64 rng(3);
  for (std::uint64_t i = 0; i < 4; ++i) {
    TernaryPoint x = random_word(rng, 256);
    DigitWord s{2, 0, 2};
    TernaryPoint z = encode(i, CodePrefix{s}, x, g, 256);
    CHECK(z == oracle_encode(i, s, x, kMinimal, 256));
    CHECK(z[0] == 2);
    CHECK(z[1] == 0);
    CHECK(z[2] == 2);
  }
  CHECK(encode(2, {}, TernaryPoint::zeros(256), g, 256) == TernaryPoint::zeros(256));
}

TEST_CASE("blocks 0 and 1 of an unprefixed code are zero") {
  BlockSchedule g = BlockSchedule::minimal();
  std::mt19937_64 rng(9);
  TernaryPoint x = random_word(rng, 256);
  TernaryPoint z = encode(1, {}, x, g, 256);
  for (long k = 0; k < 2; ++k)
    for (Digit d : block(z, k, g)) CHECK(d == 0);
}

TEST_CASE("decode round trips tiny targets") {
  std::mt19937_64 rng(21);
  TinyFamily fam = TinyFamily::polylog(1.0, 2);
  for (auto sched : {BlockSchedule::minimal(), BlockSchedule({0, 4, 16, 256})}) {
    std::vector<TernaryPoint> ys;
    for (int t = 0; t < 4; ++t) ys.push_back(random_tiny_point(sched, 256, fam, rng));
    for (const auto& y : ys) REQUIRE(in_T_surrogate(y, sched, fam));
    DecodeResult d = decode(ys, sched, 256);
    for (std::size_t i = 0; i < ys.size(); ++i) {
      std::vector<std::uint64_t> G;
      for (std::size_t k = 0; k < sched.levels(); ++k) G.push_back(sched(k));
      TernaryPoint z = oracle_encode(i, d.shifts[i].symbols, d.x, G, 256);
      CHECK(z == ys[i]);
    }
    // psi(k) <= (m - 1 + F(k + 2))^2 <= (3 + F(k + 3))^2.
    TinyFamily bound = TinyFamily::power(TinyFamily::shift(fam, 3), 2);
    CHECK(in_T_surrogate(d.x, sched, bound));
  }
  DecodeResult z = decode({TernaryPoint::zeros(256)}, BlockSchedule::minimal(), 256);
  CHECK(z.x.value() == 0);
  CHECK_THROWS_AS(decode({TernaryPoint::zeros(256)}, BlockSchedule::minimal(), 100), Error);
}

TEST_CASE("flatness exponents") {
  BlockSchedule g = BlockSchedule::minimal();
  CHECK(flatness_exponent(g, 2, 1) == -11);
  CHECK(flatness_exponent(g, 1, 2) == 1);
  for (std::size_t q = 1; q <= 8; ++q) {
    std::mt19937_64 rng(q);
    FlatnessReport r = flatness_certificate(1, {}, q, 6, g, 256, 0, rng);
    REQUIRE(r.k0 < r.rows.size());
    for (std::size_t k = r.k0; k + 1 < r.rows.size(); ++k) CHECK(r.rows[k + 1].exponent < r.rows[k].exponent);
    // Independent: -Gamma(k+2) + 1 + q Gamma(k+1) with the squaring continuation.
    BigInt G7 = BigInt(65536) * 65536;
    CHECK(r.rows[5].exponent == -G7 + 1 + BigInt(static_cast<unsigned long>(q)) * 65536);
  }
  std::mt19937_64 rng(2);
  CHECK(flatness_certificate(1, {}, 2, 6, g, 256, 0, rng).k0 > 1);
}

TEST_CASE("sampled pairs never violate the digit bound") {
  BlockSchedule g = BlockSchedule::minimal();
  std::mt19937_64 rng(77);
  FlatnessReport r = flatness_certificate(2, CodePrefix{{2, 2}}, 1, 6, g, 256, 1000, rng);
  CHECK(r.total_violations() == 0);
  std::size_t sampled = 0;
  for (const auto& row : r.rows) sampled += row.pairs;
  CHECK(sampled == 1000);

  // Oracle replay: a first difference in block k of x moves to block k + 2 or later.
  std::mt19937_64 rng2(78);
  std::size_t differing = 0;
  for (int t = 0; t < 400; ++t) {
    TernaryPoint x = random_word(rng2, 256);
    DigitWord yd(x.digits().begin(), x.digits().end());
    std::size_t n = rng2() % 16;
    yd[n] = static_cast<Digit>(2 - yd[n]);
    for (std::size_t m = n + 1; m < 256; ++m)
      if (rng2() % 2) yd[m] = static_cast<Digit>(2 - yd[m]);
    std::size_t k = g.level_of(n);
    std::uint64_t i = rng2() % 3;
    TernaryPoint zx = oracle_encode(i, {}, x, kMinimal, 256), zy = oracle_encode(i, {}, TernaryPoint(yd), kMinimal, 256);
    if (zx == zy) continue;
    ++differing;
    CHECK(delta(zx, zy) >= kMinimal[k + 2]);
  }
  CHECK(differing > 0);
}

TEST_CASE("tiny families") {
  TinyFamily c = TinyFamily::constant(3);
  CHECK(c(0) == 3);
  CHECK(c(1000) == 3);
  TinyFamily p = TinyFamily::polylog(1.0, 2);
  CHECK(p(0) == 1);
  CHECK(p(2) == 4);
  for (unsigned r = 1; r <= 4; ++r) {
    TinyFamily pw = TinyFamily::power(p, r), sh = TinyFamily::shift(p, r);
    for (std::uint64_t k = 0; k < 200; ++k) {
      std::uint64_t base = p(k), expect = 1;
      for (unsigned t = 0; t < r; ++t) expect *= base;
      CHECK(pw(k) == expect);
      CHECK(sh(k) == r + p(k + r));
    }
    CHECK(pw.certified());
  }
  BlockSchedule g = BlockSchedule::minimal();
  CHECK(in_T_surrogate(TernaryPoint::zeros(256), g, c));
  DigitWord full(256, 2);
  CHECK_FALSE(in_T_surrogate(TernaryPoint(full), g, c));
}
