#include "bregman/pchip.hpp"

#include <algorithm>
#include <cmath>

#include "bregman/errors.hpp"

namespace bregman {
namespace {

double simpson_rule(const std::function<double(double)>& f, double a,
                    double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_recurse(const std::function<double(double)>& f, double a,
                       double fa, double b, double fb, double fm, double whole,
                       double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson_rule(f, a, fa, m, fm, flm);
  const double right = simpson_rule(f, m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth >= 40 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_recurse(f, a, fa, m, fm, flm, left, 0.5 * tol, depth + 1) +
         simpson_recurse(f, m, fm, b, fb, frm, right, 0.5 * tol, depth + 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = simpson_rule(f, a, fa, b, fb, fm);
  return simpson_recurse(f, a, fa, b, fb, fm, whole, tol, 0);
}

MonotoneCurve MonotoneCurve::fit(
    const std::vector<std::array<double, 2>>& samples) {
  const auto m = static_cast<Eigen::Index>(samples.size());
  if (m < 2) throw ValidationError("curve table needs at least two rows");

  MonotoneCurve c;
  c.t_.resize(m);
  c.v_.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    c.t_[i] = samples[static_cast<std::size_t>(i)][0];
    c.v_[i] = samples[static_cast<std::size_t>(i)][1];
  }
  if (c.t_[0] != 0.0 || c.v_[0] != 0.0) {
    throw ValidationError("curve table must start at (0, 0)");
  }
  for (Eigen::Index i = 0; i + 1 < m; ++i) {
    if (!(c.t_[i + 1] > c.t_[i]) || !(c.v_[i + 1] > c.v_[i])) {
      throw ValidationError("curve table must be strictly increasing");
    }
  }

  // Fritsch-Carlson knot slopes: weighted harmonic mean of adjacent secants,
  // endpoints by the shape-limited three-point rule.
  Eigen::VectorXd h(m - 1), delta(m - 1);
  for (Eigen::Index i = 0; i + 1 < m; ++i) {
    h[i] = c.t_[i + 1] - c.t_[i];
    delta[i] = (c.v_[i + 1] - c.v_[i]) / h[i];
  }
  c.d_.resize(m);
  if (m == 2) {
    c.d_[0] = c.d_[1] = delta[0];
  } else {
    for (Eigen::Index i = 1; i + 1 < m; ++i) {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      c.d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
      double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
      if (d * d0 <= 0.0) return 0.0;
      if (d1 * d0 <= 0.0 && std::abs(d) > 3.0 * std::abs(d0)) return 3.0 * d0;
      return d;
    };
    c.d_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    c.d_[m - 1] = end_slope(h[m - 2], h[m - 3], delta[m - 2], delta[m - 3]);
  }
  // A flat right end would cap the linear extension; half the last secant
  // stays inside the monotone region and keeps the curve increasing to +inf.
  if (c.d_[m - 1] <= 0.0) c.d_[m - 1] = 0.5 * delta[m - 2];
  return c;
}

Eigen::Index MonotoneCurve::interval(double t) const {
  const auto* begin = t_.data();
  const auto* end = t_.data() + t_.size();
  auto idx = static_cast<Eigen::Index>(std::upper_bound(begin, end, t) - begin);
  return std::clamp<Eigen::Index>(idx - 1, 0, t_.size() - 2);
}

double MonotoneCurve::operator()(double t) const {
  if (t < 0.0) throw DomainError("curve argument must be nonnegative");
  const Eigen::Index n = t_.size();
  if (t >= t_[n - 1]) return v_[n - 1] + d_[n - 1] * (t - t_[n - 1]);
  const Eigen::Index i = interval(t);
  const double h = t_[i + 1] - t_[i];
  const double s = (t - t_[i]) / h;
  const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
  const double h10 = s * (1.0 - s) * (1.0 - s);
  const double h01 = s * s * (3.0 - 2.0 * s);
  const double h11 = s * s * (s - 1.0);
  return h00 * v_[i] + h * h10 * d_[i] + h01 * v_[i + 1] + h * h11 * d_[i + 1];
}

double MonotoneCurve::derivative(double t) const {
  if (t < 0.0) throw DomainError("curve argument must be nonnegative");
  const Eigen::Index n = t_.size();
  if (t >= t_[n - 1]) return d_[n - 1];
  const Eigen::Index i = interval(t);
  const double h = t_[i + 1] - t_[i];
  const double s = (t - t_[i]) / h;
  const double g00 = 6.0 * s * (s - 1.0) / h;
  const double g10 = (1.0 - s) * (1.0 - 3.0 * s);
  const double g01 = -g00;
  const double g11 = s * (3.0 * s - 2.0);
  return g00 * v_[i] + g10 * d_[i] + g01 * v_[i + 1] + g11 * d_[i + 1];
}

double MonotoneCurve::integral(double t, double tol) const {
  if (t < 0.0) throw DomainError("curve argument must be nonnegative");
  if (t == 0.0) return 0.0;
  auto f = [this](double u) { return (*this)(u); };
  const Eigen::Index n = t_.size();
  double acc = 0.0;
  for (Eigen::Index i = 0; i + 1 < n && t_[i] < t; ++i) {
    const double hi = std::min(t, t_[i + 1]);
    acc += adaptive_simpson(f, t_[i], hi, tol);
  }
  if (t > t_[n - 1]) {
    const double u = t - t_[n - 1];
    acc += v_[n - 1] * u + 0.5 * d_[n - 1] * u * u;
  }
  return acc;
}

double MonotoneCurve::inverse(double v) const {
  if (v < 0.0) throw DomainError("curve values are nonnegative");
  if (v == 0.0) return 0.0;
  const Eigen::Index n = t_.size();
  if (v >= v_[n - 1]) return t_[n - 1] + (v - v_[n - 1]) / d_[n - 1];

  double lo = 0.0, hi = t_[n - 1];
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double err = (*this)(t)-v;
    if (std::abs(err) <= 1e-12 * (1.0 + v)) return t;
    (err > 0.0 ? hi : lo) = t;
    const double dv = derivative(t);
    double next = dv > 0.0 ? t - err / dv : t;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    t = next;
  }
  return t;
}

}  // namespace bregman
