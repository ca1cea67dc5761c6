#include "ctvol/cubic.h"

#include <algorithm>
#include <stdexcept>

namespace ctvol {

PiecewiseCubic::PiecewiseCubic(std::vector<double> breaks, std::vector<CubicDD> pieces)
  : breaks_(std::move(breaks))
  , pieces_(std::move(pieces))
{
  if (pieces_.size() != breaks_.size() + 1)
    throw std::invalid_argument("PiecewiseCubic: need exactly one more piece than breakpoint");
  if (!std::is_sorted(breaks_.begin(), breaks_.end()))
    throw std::invalid_argument("PiecewiseCubic: breakpoints must be non-decreasing");
}

CubicDD CubicDD::fromShifted(double origin, double c0, double c1, double c2, double c3)
{
  // Horner-style Taylor shift: repeatedly divide by (h - origin)
  std::array<DoubleDouble, 4> c{c3, c2, c1, c0};
  const DoubleDouble o = -origin;
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t i = 1; i < 4 - k; ++i)
      c[i] += c[i - 1] * o;
  CubicDD r;
  r.c_ = c;
  return r;
}

std::size_t PiecewiseCubic::segmentAt(double h) const
{
  return static_cast<std::size_t>(std::upper_bound(breaks_.begin(), breaks_.end(), h) - breaks_.begin());
}

} // namespace ctvol
