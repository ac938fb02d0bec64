#include "edens/covering.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "edens/error.hpp"

namespace edens {

BallFamily::BallFamily(int dim, std::vector<Ball> balls) : dim_(dim), balls_(std::move(balls)) {
  check_dim(dim);
  if (balls_.empty()) throw std::invalid_argument("BallFamily: empty family");
  for (const auto& b : balls_) {
    if (b.center.dim() != dim) throw std::invalid_argument("BallFamily: mixed dimensions");
    make_ball(b.center, b.radius);
  }
}

bool balls_disjoint(const Ball& a, const Ball& b) {
  return distance(a.center, b.center) > a.radius + b.radius + kCoverSlack;
}

bool enlargement_contains(const Ball& selected, const Ball& ball) {
  return distance(selected.center, ball.center) + ball.radius <=
         3.0 * selected.radius + kCoverSlack;
}

std::vector<std::size_t> vitali_select(const BallFamily& family) {
  std::vector<std::size_t> order(family.size());
  std::iota(order.begin(), order.end(), std::size_t{1});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return family[a].radius > family[b].radius;
  });
  std::vector<std::size_t> chosen;
  for (std::size_t j : order) {
    const bool free = std::all_of(chosen.begin(), chosen.end(), [&](std::size_t i) {
      return balls_disjoint(family[i], family[j]);
    });
    if (free) chosen.push_back(j);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::string_view to_string(CoverViolation::Kind kind) {
  switch (kind) {
    case CoverViolation::Kind::overlap: return "overlap";
    case CoverViolation::Kind::uncovered: return "uncovered";
    case CoverViolation::Kind::bad_index: return "bad_index";
  }
  return "unknown";
}

CoverReport verify_cover(const BallFamily& family, const std::vector<std::size_t>& selected) {
  CoverReport report;
  report.selected = selected;
  report.covered_by.assign(family.size(), 0);
  std::vector<std::size_t> valid;
  for (std::size_t i : selected) {
    if (i < 1 || i > family.size()) {
      report.violations.push_back({CoverViolation::Kind::bad_index, i, 0,
                                   "index " + std::to_string(i) + " outside 1.." +
                                       std::to_string(family.size())});
    } else {
      valid.push_back(i);
    }
  }
  for (std::size_t a = 0; a < valid.size(); ++a) {
    for (std::size_t b = a + 1; b < valid.size(); ++b) {
      const auto& ba = family[valid[a]];
      const auto& bb = family[valid[b]];
      if (!balls_disjoint(ba, bb)) {
        std::ostringstream d;
        d.precision(17);
        d << "center distance " << distance(ba.center, bb.center) << " <= radius sum "
          << ba.radius + bb.radius;
        report.violations.push_back({CoverViolation::Kind::overlap, valid[a], valid[b], d.str()});
      }
    }
  }
  for (std::size_t j = 1; j <= family.size(); ++j) {
    // Prefer the largest certifying ball; ties to the lower index.
    std::size_t best = 0;
    for (std::size_t i : valid) {
      if (enlargement_contains(family[i], family[j]) &&
          (best == 0 || family[i].radius > family[best].radius)) {
        best = i;
      }
    }
    report.covered_by[j - 1] = best;
    if (best == 0) {
      report.violations.push_back({CoverViolation::Kind::uncovered, j, 0,
                                   "no selected ball satisfies |a_j - a_i| + r_j <= 3 r_i"});
    }
  }
  return report;
}

BallFamily parse_ball_family_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<Ball> balls;
  int dim = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line.front() == '#') continue;
    std::vector<double> nums;
    std::istringstream cells(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(cells, cell, ',')) {
      try {
        std::size_t used = 0;
        nums.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (balls.empty()) continue;  // header
      throw ConfigError("ball csv line " + std::to_string(line_no) + ": non-numeric entry");
    }
    const int row_dim = static_cast<int>(nums.size()) - 2;
    if (row_dim < 1 || row_dim > kMaxDim) {
      throw ConfigError("ball csv line " + std::to_string(line_no) + ": expected index,x1..xD,r");
    }
    if (dim == 0) dim = row_dim;
    if (row_dim != dim) throw ConfigError("ball csv: inconsistent dimension");
    if (nums[0] != static_cast<double>(balls.size() + 1)) {
      throw ConfigError("ball csv line " + std::to_string(line_no) + ": indices must run 1..K");
    }
    Point c = Point::zero(dim);
    for (int i = 0; i < dim; ++i) c[i] = nums[static_cast<std::size_t>(i) + 1];
    const double r = nums.back();
    if (!(r > 0.0)) throw ConfigError("ball csv line " + std::to_string(line_no) + ": radius <= 0");
    balls.push_back(Ball{c, r});
  }
  if (balls.empty()) throw ConfigError("ball csv: no balls");
  return BallFamily(dim, std::move(balls));
}

BallFamily load_ball_family_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open ball csv: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_ball_family_csv(buf.str());
}

}  // namespace edens
