#include "lagflow/field/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lagflow {

Grid3::Grid3(int n_, double box_len_) : n(n_), box_len(box_len_) {
  if (n < 8 || (n & (n - 1)) != 0)
    throw std::invalid_argument("grid n must be a power of two >= 8, got " + std::to_string(n));
  if (!(box_len > 0.0) || !std::isfinite(box_len))
    throw std::invalid_argument("grid box_len must be > 0");
}

double Grid3::cell_volume() const {
  const double h = spacing();
  return h * h * h;
}

double Grid3::k_of(int j) const { return 2.0 * std::numbers::pi * j / box_len; }

}  // namespace lagflow
