#pragma once

#include "ctvol/compensated.h"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace ctvol {

/// a*h^3 + b*h^2 + c*h + d in standard form.
struct CubicPoly
{
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  static constexpr CubicPoly constant(double v) { return {0.0, 0.0, 0.0, v}; }

  constexpr double operator()(double h) const { return ((a * h + b) * h + c) * h + d; }
  constexpr double derivative(double h) const { return (3.0 * a * h + 2.0 * b) * h + c; }

  constexpr std::array<double, 4> coeffs() const { return {a, b, c, d}; }

  friend constexpr CubicPoly operator+(const CubicPoly& p, const CubicPoly& q)
  {
    return {p.a + q.a, p.b + q.b, p.c + q.c, p.d + q.d};
  }
  friend constexpr CubicPoly operator-(const CubicPoly& p, const CubicPoly& q)
  {
    return {p.a - q.a, p.b - q.b, p.c - q.c, p.d - q.d};
  }
  friend constexpr CubicPoly operator*(double s, const CubicPoly& p)
  {
    return {s * p.a, s * p.b, s * p.c, s * p.d};
  }
  friend constexpr bool operator==(const CubicPoly&, const CubicPoly&) = default;
};

/// Standard-form cubic with double-double coefficients and double-double
/// evaluation. Holds per-tet pieces, their deltas and superarc sums.
class CubicDD
{
public:
  CubicDD() = default;
  CubicDD(const CubicPoly& p) : c_{p.a, p.b, p.c, p.d} {} // NOLINT: implicit by design

  static CubicDD constant(double v) { return CubicPoly::constant(v); }

  /// Standard form of c0 + c1*u + c2*u^2 + c3*u^3 with u = h - origin.
  static CubicDD fromShifted(double origin, double c0, double c1, double c2, double c3);

  CubicDD& operator+=(const CubicDD& o)
  {
    for (std::size_t i = 0; i < 4; ++i)
      c_[i] += o.c_[i];
    return *this;
  }
  CubicDD& operator-=(const CubicDD& o)
  {
    for (std::size_t i = 0; i < 4; ++i)
      c_[i] -= o.c_[i];
    return *this;
  }
  friend CubicDD operator+(CubicDD p, const CubicDD& q) { return p += q; }
  friend CubicDD operator-(CubicDD p, const CubicDD& q) { return p -= q; }
  CubicDD operator-() const
  {
    CubicDD r;
    for (std::size_t i = 0; i < 4; ++i)
      r.c_[i] = -c_[i];
    return r;
  }

  DoubleDouble evaluate(double h) const
  {
    DoubleDouble r = c_[0];
    for (std::size_t i = 1; i < 4; ++i)
      r = r * h + c_[i];
    return r;
  }
  double operator()(double h) const { return evaluate(h).value(); }

  /// Coefficients rounded to double.
  CubicPoly rounded() const { return {c_[0].value(), c_[1].value(), c_[2].value(), c_[3].value()}; }
  const std::array<DoubleDouble, 4>& coeffs() const { return c_; }

private:
  std::array<DoubleDouble, 4> c_{};
};

/// Piecewise cubic on consecutive intervals. Segment i is valid on
/// [breaks[i-1], breaks[i]) with breaks[-1] = -inf and breaks[n] = +inf;
/// there is one more segment than breakpoint.
class PiecewiseCubic
{
public:
  PiecewiseCubic() : pieces_{CubicDD{}} {}
  PiecewiseCubic(std::vector<double> breaks, std::vector<CubicDD> pieces);

  std::size_t pieceCount() const { return pieces_.size(); }
  std::span<const double> breakpoints() const { return breaks_; }
  std::span<const CubicDD> pieces() const { return pieces_; }

  /// Index of the segment used for h (right-continuous at breakpoints).
  std::size_t segmentAt(double h) const;
  const CubicDD& pieceAt(double h) const { return pieces_[segmentAt(h)]; }
  double operator()(double h) const { return pieceAt(h)(h); }

private:
  std::vector<double> breaks_;
  std::vector<CubicDD> pieces_;
};

} // namespace ctvol
