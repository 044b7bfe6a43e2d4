#include "woldlab/lanes.hpp"

#include <cmath>

namespace woldlab {

const char* to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::finite: return "finite";
    case DomainKind::naturals: return "naturals";
    case DomainKind::integers: return "integers";
    case DomainKind::quadrant: return "quadrant";
  }
  return "?";
}

bool LaneSpec::contains(std::int64_t position) const {
  switch (kind) {
    case DomainKind::finite: return position >= 0 && position < size;
    case DomainKind::naturals:
    case DomainKind::quadrant: return position >= 0;
    case DomainKind::integers: return true;
  }
  return false;
}

std::string to_string(const BasisIndex& index) {
  return std::to_string(index.lane) + ":" + std::to_string(index.position);
}

std::int64_t grid_position(GridPoint point) {
  const std::int64_t d = point.i + point.j;
  return d * (d + 1) / 2 + point.j;
}

GridPoint grid_point(std::int64_t position) {
  auto d = static_cast<std::int64_t>((std::sqrt(8.0 * static_cast<double>(position) + 1.0) - 1.0) / 2.0);
  while (d * (d + 1) / 2 > position) --d;
  while ((d + 1) * (d + 2) / 2 <= position) ++d;
  const std::int64_t j = position - d * (d + 1) / 2;
  return {d - j, j};
}

}  // namespace woldlab
