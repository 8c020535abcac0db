#pragma once

#include <array>
#include <vector>

#include "bregman/pchip.hpp"

namespace bregman {

/// Even, strictly convex Orlicz function φ with φ(0) = 0 and φ(1) = 1,
/// stored through its restriction to t ≥ 0 as a monotone sample table.
/// from_table validates, on the grid:
///   - knots start at 0 with φ(0) = 0 and strictly increasing values,
///   - secant slopes strictly increase (discrete strict convexity),
///   - the grid reaches t = 1 and φ(1) = 1 within 1e-9,
///   - doubling bounds 2 < φ(2t)/φ(t) ≤ 1e6 wherever 2t stays on the grid
///     (superlinear growth below, a Δ₂ bound above).
/// value/derivative extend evenly/oddly to t < 0; inverse is the
/// branch on [0, ∞[ with tolerance 1e-12.
class OrliczFunction {
 public:
  static OrliczFunction from_table(
      const std::vector<std::array<double, 2>>& samples);

  double value(double t) const { return curve_(std::abs(t)); }
  double derivative(double t) const {
    const double d = curve_.derivative(std::abs(t));
    return t < 0.0 ? -d : d;
  }
  double inverse(double v) const { return curve_.inverse(v); }
  double t_max() const { return curve_.t_max(); }
  const MonotoneCurve& curve() const { return curve_; }

 private:
  OrliczFunction() = default;
  MonotoneCurve curve_;
};

}  // namespace bregman
