#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "edens/geometry.hpp"

namespace edens {

/// Finite family of closed balls in R^D.  Indices reported by the covering
/// routines are 1-based, matching the order of construction.
class BallFamily {
 public:
  BallFamily(int dim, std::vector<Ball> balls);

  int dim() const { return dim_; }
  std::size_t size() const { return balls_.size(); }
  /// 1-based access.
  const Ball& operator[](std::size_t index) const { return balls_.at(index - 1); }
  const std::vector<Ball>& balls() const { return balls_; }

 private:
  int dim_;
  std::vector<Ball> balls_;
};

/// Slack used for floating-point disjointness and containment tests.
inline constexpr double kCoverSlack = 1e-12;

/// Closed balls are disjoint when the centre distance exceeds the radius sum.
bool balls_disjoint(const Ball& a, const Ball& b);
/// Certificate |a_j - a_i| + r_j <= 3 r_i that B_j lies in the 3x enlargement of B_i.
bool enlargement_contains(const Ball& selected, const Ball& ball);

/// Greedy Vitali selection: repeatedly take the largest-radius ball that does
/// not meet any ball already taken (ties go to the lower index).  Returns the
/// selected indices in increasing order.
std::vector<std::size_t> vitali_select(const BallFamily& family);

struct CoverViolation {
  enum class Kind { overlap, uncovered, bad_index };
  Kind kind;
  std::size_t first = 0;   // overlapping pair, or the uncovered ball
  std::size_t second = 0;  // 0 when not applicable
  std::string detail;
};

std::string_view to_string(CoverViolation::Kind kind);

struct CoverReport {
  std::vector<std::size_t> selected;
  /// covered_by[j-1] is a selected index whose 3x enlargement certifies ball j, 0 if none.
  std::vector<std::size_t> covered_by;
  std::vector<CoverViolation> violations;

  bool ok() const { return violations.empty(); }
};

/// Checks pairwise disjointness of the selected balls and the enlargement
/// certificate for every input ball.  Failed checks are report entries.
CoverReport verify_cover(const BallFamily& family, const std::vector<std::size_t>& selected);

/// CSV rows "index,x1,..,xD,r" (an optional header row is skipped).  Rows
/// must list indices 1..K in order.
BallFamily parse_ball_family_csv(std::string_view text);
BallFamily load_ball_family_csv(const std::filesystem::path& path);

}  // namespace edens
