#pragma once

#include <cmath>
#include <limits>

namespace bregman {

/// Value in R ∪ {+inf}, the codomain of a closed convex potential.
/// Plain double with +inf as the out-of-domain marker; NaN never escapes —
/// arithmetic that would produce it (inf - inf) must be guarded by callers,
/// and the named constructors below are the only intended way to build one.
class ExtendedReal {
 public:
  ExtendedReal() = default;
  ExtendedReal(double v) : value_(v) {}  // NOLINT: implicit by design

  static ExtendedReal infinity() {
    return ExtendedReal(std::numeric_limits<double>::infinity());
  }

  bool is_finite() const { return std::isfinite(value_); }
  bool is_infinite() const { return std::isinf(value_) && value_ > 0; }

  /// Finite value; calling this on +inf is a programming error, so assert-like
  /// behaviour (returns inf) rather than a throw keeps hot paths branch-free.
  double value() const { return value_; }

  friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    if (a.is_infinite() || b.is_infinite()) return infinity();
    return ExtendedReal(a.value_ + b.value_);
  }
  friend bool operator==(ExtendedReal a, ExtendedReal b) {
    return a.value_ == b.value_;
  }
  friend bool operator<(ExtendedReal a, ExtendedReal b) {
    return a.value_ < b.value_;
  }

 private:
  double value_ = 0.0;
};

}  // namespace bregman
