#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "edif/rational.hpp"

namespace edif {

/// Side lengths per level: H-boxes have length p_n, K-boxes q_n.
struct BoxSchedule {
  std::vector<Rational> p;
  std::vector<Rational> q;

  /// p_n = R^{-2n}, q_n = R^{-2n-1}.
  static BoxSchedule geometric(long ratio, std::size_t levels);
  /// p_n = R^{1-(n+1)^2}, q_n = p_n R^{-(n+1)}: both ratios q_n/p_n and
  /// p_{n+1}/q_n tend to 0.
  static BoxSchedule accelerating(long ratio, std::size_t levels);

  std::size_t levels() const noexcept { return p.size(); }
  /// Throws ScheduleViolation naming the first failed inequality.
  void validate(std::size_t depth) const;
};

/// Nested interval trees for H and K with children at the two ends of each
/// parent interval. Level n holds 2^n left endpoints per side.
class BoxTree {
 public:
  std::size_t depth() const noexcept { return depth_; }
  const BoxSchedule& schedule() const noexcept { return sched_; }

  const Rational& a(std::size_t level, std::size_t index) const { return h_left_.at(level).at(index); }
  Rational b(std::size_t level, std::size_t index) const { return a(level, index) + sched_.p.at(level); }
  const Rational& c(std::size_t level, std::size_t index) const { return k_left_.at(level).at(index); }
  Rational d(std::size_t level, std::size_t index) const { return c(level, index) + sched_.q.at(level); }

  /// Leaf index (binary path read as an integer, first branch most
  /// significant) of the H-leaf containing x, if any.
  std::optional<std::size_t> h_leaf(const Rational& x) const;
  std::optional<std::size_t> k_leaf(const Rational& y) const;

  /// Same tree shifted by s on the H side and t on the K side.
  BoxTree translated(const Rational& s, const Rational& t) const;

  std::string to_json() const;

  friend BoxTree build_pair(const BoxSchedule& sched, std::size_t depth);

 private:
  BoxSchedule sched_;
  std::size_t depth_{0};
  std::vector<std::vector<Rational>> h_left_;
  std::vector<std::vector<Rational>> k_left_;
};

BoxTree build_pair(const BoxSchedule& sched, std::size_t depth);

struct SlopeBounds {
  Rational small_max;  // q_n / (p_n - 2 p_{n+1})
  Rational large_min;  // (q_n - 2 q_{n+1}) / p_{n+1}
};

SlopeBounds slope_bounds(const BoxSchedule& sched, std::size_t n);

enum class SlopeClass { Small, Large };

struct Classification {
  SlopeClass cls;
  std::size_t level;   // deepest common box level
  Rational slope;      // |dy/dx|, exact
  bool within_bound;   // slope <= small_max(level) or >= large_min(level)
};

struct PlanePoint {
  Rational x;
  Rational y;
};

Classification classify_pair(const BoxTree& tree, const PlanePoint& p0, const PlanePoint& p1);

/// Level from which small_max < eps and large_min > 1/eps hold on the rest
/// of the stored schedule, with the matching separation distance delta.
struct EpsilonDelta {
  std::size_t level;
  Rational delta;
};
std::optional<EpsilonDelta> epsilon_delta(const BoxSchedule& sched, const Rational& eps);

/// All corners of the leaf boxes at full depth.
std::vector<PlanePoint> corner_points(const BoxTree& tree);

const char* to_string(SlopeClass c);

}  // namespace edif
