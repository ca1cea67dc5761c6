#pragma once

namespace ctvol {

/// Error-free transformations: result.value + result.err == exact result.
struct TwoResult
{
  double value;
  double err;
};

inline TwoResult twoSum(double a, double b)
{
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

/// Requires |a| >= |b| or a == 0.
inline TwoResult quickTwoSum(double a, double b)
{
  const double s = a + b;
  return {s, b - (s - a)};
}

/// Dekker product; exact unless the operands overflow on splitting.
inline TwoResult twoProd(double a, double b)
{
  constexpr double kSplit = 134217729.0; // 2^27 + 1
  const double p = a * b;
  const double ta = kSplit * a;
  const double ah = ta - (ta - a), al = a - ah;
  const double tb = kSplit * b;
  const double bh = tb - (tb - b), bl = b - bh;
  return {p, ((ah * bh - p) + ah * bl + al * bh) + al * bl};
}

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2: about 106 significant bits.
class DoubleDouble
{
public:
  constexpr DoubleDouble() = default;
  constexpr DoubleDouble(double v) : hi_(v) {} // NOLINT: implicit by design

  static DoubleDouble fromParts(double hi, double lo)
  {
    const auto [s, e] = twoSum(hi, lo);
    DoubleDouble r;
    r.hi_ = s;
    r.lo_ = e;
    return r;
  }

  /// a - b without rounding.
  static DoubleDouble difference(double a, double b) { return fromParts(a, -b); }

  double value() const { return hi_ + lo_; }
  double hi() const { return hi_; }
  double lo() const { return lo_; }

  DoubleDouble operator-() const
  {
    DoubleDouble r;
    r.hi_ = -hi_;
    r.lo_ = -lo_;
    return r;
  }

  DoubleDouble& operator+=(const DoubleDouble& b)
  {
    auto [s, e] = twoSum(hi_, b.hi_);
    const auto [t, f] = twoSum(lo_, b.lo_);
    e += t;
    const auto n1 = quickTwoSum(s, e);
    const auto n2 = quickTwoSum(n1.value, n1.err + f);
    hi_ = n2.value;
    lo_ = n2.err;
    return *this;
  }
  DoubleDouble& operator-=(const DoubleDouble& b) { return *this += -b; }

  DoubleDouble& operator*=(const DoubleDouble& b)
  {
    auto [p, e] = twoProd(hi_, b.hi_);
    e += hi_ * b.lo_ + lo_ * b.hi_;
    const auto n = quickTwoSum(p, e);
    hi_ = n.value;
    lo_ = n.err;
    return *this;
  }

  friend DoubleDouble operator+(DoubleDouble a, const DoubleDouble& b) { return a += b; }
  friend DoubleDouble operator-(DoubleDouble a, const DoubleDouble& b) { return a -= b; }
  friend DoubleDouble operator*(DoubleDouble a, const DoubleDouble& b) { return a *= b; }
  friend bool operator==(const DoubleDouble&, const DoubleDouble&) = default;

private:
  double hi_ = 0.0;
  double lo_ = 0.0;
};

} // namespace ctvol
