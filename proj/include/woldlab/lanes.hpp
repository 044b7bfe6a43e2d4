#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <utility>

namespace woldlab {

/// Shape of the position set of one basis lane.
///
/// `quadrant` lanes index N x N; a position is the anti-diagonal (Cantor)
/// enumeration index of the grid point, see grid_position().
enum class DomainKind { finite, naturals, integers, quadrant };

const char* to_string(DomainKind kind);

struct LaneSpec {
  int id = 0;
  DomainKind kind = DomainKind::naturals;
  std::int64_t size = 0;  // only meaningful for finite lanes
  std::string label;

  bool contains(std::int64_t position) const;
  bool is_finite() const { return kind == DomainKind::finite; }
};

struct BasisIndex {
  int lane = 0;
  std::int64_t position = 0;

  auto operator<=>(const BasisIndex&) const = default;
};

std::string to_string(const BasisIndex& index);

struct GridPoint {
  std::int64_t i = 0;
  std::int64_t j = 0;

  auto operator<=>(const GridPoint&) const = default;
};

/// Anti-diagonal enumeration of N x N: (0,0), (1,0), (0,1), (2,0), ...
std::int64_t grid_position(GridPoint point);
GridPoint grid_point(std::int64_t position);
inline std::int64_t grid_diagonal(std::int64_t position) {
  const GridPoint p = grid_point(position);
  return p.i + p.j;
}

}  // namespace woldlab
