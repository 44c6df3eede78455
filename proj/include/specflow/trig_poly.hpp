#pragma once

#include <array>
#include <vector>

namespace specflow {

/// c * cos(2 pi (kx x + ky y)) + s * sin(2 pi (kx x + ky y))
struct TrigTerm {
  int kx = 0;
  int ky = 0;
  double c = 0;
  double s = 0;
};

/// Real trigonometric polynomial on the torus with closed-form derivatives.
class TrigPoly {
 public:
  TrigPoly() = default;
  explicit TrigPoly(std::vector<TrigTerm> terms);
  static TrigPoly constant(double c);

  const std::vector<TrigTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  double value(double x, double y) const;
  /// (d/dx, d/dy)
  std::array<double, 2> gradient(double x, double y) const;
  /// (xx, xy, yy)
  std::array<double, 3> hessian(double x, double y) const;
  /// Value and gradient in one pass; returns {v, d/dx, d/dy}.
  std::array<double, 3> value_gradient(double x, double y) const;
  /// Mean over the torus (coefficient of the constant mode).
  double mean() const;

  /// p(x - zx, y - zy)
  TrigPoly shifted(double zx, double zy) const;

  friend TrigPoly operator+(const TrigPoly& a, const TrigPoly& b);
  friend TrigPoly operator*(const TrigPoly& a, const TrigPoly& b);
  friend TrigPoly operator*(double k, const TrigPoly& a);

 private:
  void normalize();
  std::vector<TrigTerm> terms_;
};

}  // namespace specflow
