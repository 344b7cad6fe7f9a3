#include "edif/ternary.hpp"

#include <string>

#include "edif/error.hpp"

namespace edif {

TernaryPoint::TernaryPoint(DigitWord digits) : digits_(std::move(digits)) {
  if (digits_.empty()) throw Error(ErrorKind::InvalidInput, "ternary word needs depth >= 1");
  for (Digit d : digits_)
    if (d != 0 && d != 2) throw Error(ErrorKind::InvalidInput, "ternary digit outside {0,2}");
}

TernaryPoint TernaryPoint::zeros(std::size_t depth) { return TernaryPoint(DigitWord(depth, 0)); }

TernaryPoint TernaryPoint::parse(std::string_view text) {
  DigitWord out;
  bool seen_point = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (seen_point || i != 1) throw Error(ErrorKind::InvalidInput, "misplaced point in ternary word");
      seen_point = true;
      continue;
    }
    if (c != '0' && c != '2') throw Error(ErrorKind::InvalidInput, "bad ternary digit '" + std::string(1, c) + "'");
    out.push_back(static_cast<Digit>(c - '0'));
  }
  return TernaryPoint(std::move(out));
}

Rational TernaryPoint::value() const {
  // Horner in base 3 over the numerator, single division at the end.
  BigInt num = 0;
  for (Digit d : digits_) num = num * 3 + d;
  Rational q(num, ipow(3, digits_.size() - 1));
  q.canonicalize();
  return q;
}

std::string TernaryPoint::str() const {
  std::string s;
  s.reserve(digits_.size() + 1);
  s.push_back(static_cast<char>('0' + digits_[0]));
  if (digits_.size() > 1) s.push_back('.');
  for (std::size_t i = 1; i < digits_.size(); ++i) s.push_back(static_cast<char>('0' + digits_[i]));
  return s;
}

BlockSchedule::BlockSchedule(std::vector<std::uint64_t> gamma) : gamma_(std::move(gamma)) {
  if (gamma_.empty() || gamma_[0] != 0)
    throw Error(ErrorKind::InvalidInput, "block schedule must start at 0");
  for (std::size_t k = 0; k + 1 < gamma_.size(); ++k) {
    if (gamma_[k + 1] <= gamma_[k])
      throw Error(ErrorKind::InvalidInput, "block schedule not strictly increasing at " + std::to_string(k));
    if (gamma_[k] > 0xffffffffULL || gamma_[k + 1] < gamma_[k] * gamma_[k])
      throw Error(ErrorKind::InvalidInput, "block schedule violates Gamma(k+1) >= Gamma(k)^2 at " + std::to_string(k));
  }
}

BlockSchedule BlockSchedule::minimal(std::size_t levels) {
  if (levels == 0 || levels > 7) throw Error(ErrorKind::InvalidInput, "minimal schedule supports 1..7 levels");
  std::vector<std::uint64_t> g{0};
  while (g.size() < levels) {
    std::uint64_t last = g.back();
    g.push_back(std::max(last + 1, last * last));
  }
  return BlockSchedule(std::move(g));
}

std::uint64_t BlockSchedule::block_length(std::size_t k) const {
  if (k + 1 >= gamma_.size())
    throw Error(ErrorKind::InsufficientDepth, "schedule has no Gamma(" + std::to_string(k + 1) + ")");
  return gamma_[k + 1] - gamma_[k];
}

std::size_t BlockSchedule::level_of(std::uint64_t n) const {
  std::size_t k = 0;
  while (k + 1 < gamma_.size() && gamma_[k + 1] <= n) ++k;
  if (k + 1 >= gamma_.size())
    throw Error(ErrorKind::InsufficientDepth, "index " + std::to_string(n) + " beyond stored schedule");
  return k;
}

std::uint64_t pair_phi(std::uint64_t i, std::uint64_t j) {
  std::uint64_t m = std::max(i, j);
  std::uint64_t within = (j == m) ? i : m + (m - j);
  return m * m + within;
}

std::pair<std::uint64_t, std::uint64_t> unpair_phi(std::uint64_t n) {
  std::uint64_t m = 0;
  while ((m + 1) * (m + 1) <= n) ++m;
  std::uint64_t t = n - m * m;
  if (t <= m) return {t, m};
  return {m, 2 * m - t};
}

std::size_t delta(const TernaryPoint& x, const TernaryPoint& y) {
  std::size_t depth = std::min(x.depth(), y.depth());
  for (std::size_t n = 0; n < depth; ++n)
    if (x[n] != y[n]) return n;
  throw Error(ErrorKind::EqualWithinDepth, "points agree on all " + std::to_string(depth) + " shared digits");
}

DigitWord block(const TernaryPoint& x, long k, const BlockSchedule& sched) {
  if (k < 0) return {};
  auto uk = static_cast<std::size_t>(k);
  std::uint64_t len = sched.block_length(uk);
  if (x.depth() < sched(uk + 1))
    throw Error(ErrorKind::InsufficientDepth, "block " + std::to_string(k) + " needs depth " + std::to_string(sched(uk + 1)));
  auto digits = x.digits();
  auto first = digits.begin() + static_cast<std::ptrdiff_t>(sched(uk));
  return DigitWord(first, first + static_cast<std::ptrdiff_t>(len));
}

Digit block_digit(const TernaryPoint& x, long k, std::uint64_t j, const BlockSchedule& sched) {
  if (k < 0) return 0;
  auto uk = static_cast<std::size_t>(k);
  if (j >= sched.block_length(uk)) return 0;
  std::uint64_t n = sched(uk) + j;
  if (n >= x.depth())
    throw Error(ErrorKind::InsufficientDepth, "digit " + std::to_string(n) + " not stored");
  return x[n];
}

std::uint64_t ell(const TernaryPoint& x, std::size_t k, const BlockSchedule& sched) {
  DigitWord b = block(x, static_cast<long>(k), sched);
  std::uint64_t l = b.size();
  while (l > 0 && b[l - 1] == 0) --l;
  return l;
}

TernaryPoint from_blocks(std::span<const DigitWord> blocks) {
  DigitWord out;
  for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
  return TernaryPoint(std::move(out));
}

}  // namespace edif
