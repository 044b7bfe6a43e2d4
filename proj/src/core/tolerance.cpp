#include "woldlab/tolerance.hpp"

#include <cstdlib>
#include <string>

namespace woldlab {

namespace {

double read_tolerance() {
  constexpr double kDefault = 1e-9;
  const char* raw = std::getenv("WOLDLAB_TOLERANCE");
  if (raw == nullptr || *raw == '\0') return kDefault;
  try {
    std::size_t used = 0;
    const double value = std::stod(raw, &used);
    if (used == std::string(raw).size() && value > 0.0 && value < 1e-2) return value;
  } catch (const std::exception&) {
  }
  return kDefault;
}

}  // namespace

double tolerance() {
  static const double eps = read_tolerance();
  return eps;
}

}  // namespace woldlab
