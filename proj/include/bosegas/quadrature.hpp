#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "bosegas/errors.hpp"
#include "bosegas/summation.hpp"

// Fixed-order quadrature and interpolation helpers used by the radial
// solvers. Everything is deterministic: uniform grids, pairwise reductions.
namespace bosegas {

// Composite Simpson rule with 2*panels+1 uniform samples on [a, b].
template <class F>
double simpson(F&& f, double a, double b, int panels) {
  if (!(b > a)) return 0.0;
  panels = std::max(1, panels);
  const int n = 2 * panels;
  const double h = (b - a) / n;
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(n) + 1);
  terms.push_back(f(a));
  for (int i = 1; i < n; ++i) {
    const double w = (i % 2 == 1) ? 4.0 : 2.0;
    terms.push_back(w * f(a + i * h));
  }
  terms.push_back(f(b));
  return pairwise_sum(terms) * h / 3.0;
}

// Simpson with the range split at known breakpoints (kinks/jumps of the
// integrand), so each smooth piece is integrated at full order. The panel
// budget is distributed proportionally to piece length.
template <class F>
double simpson_split(F&& f, double a, double b, std::span<const double> breaks,
                     int panels_total) {
  if (!(b > a)) return 0.0;
  std::vector<double> pts;
  pts.push_back(a);
  for (double x : breaks) {
    if (x > a && x < b) pts.push_back(x);
  }
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [&](double u, double v) {
                          return std::abs(u - v) <= 1e-15 * (b - a);
                        }),
            pts.end());
  std::vector<double> pieces;
  pieces.reserve(pts.size() - 1);
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double lo = pts[i], hi = pts[i + 1];
    const int panels = std::max(
        8, static_cast<int>(std::ceil(panels_total * (hi - lo) / (b - a))));
    // Sample endpoints one-sidedly from within the piece, so jump
    // discontinuities located exactly at breakpoints integrate with their
    // interior limits.
    const double nudge = (hi - lo) * 1e-9;
    pieces.push_back(simpson(
        [&](double x) { return f(std::clamp(x, lo + nudge, hi - nudge)); }, lo,
        hi, panels));
  }
  return pairwise_sum(pieces);
}

// Cubic (four-point Lagrange) interpolation on uniformly spaced samples.
// Falls back to linear interpolation for tables shorter than four entries.
class UniformTable {
 public:
  UniformTable() = default;
  UniformTable(double x0, double h, std::vector<double> y)
      : x0_(x0), h_(h), y_(std::move(y)) {
    if (h_ <= 0.0 || y_.size() < 2)
      throw DomainError("UniformTable needs h > 0 and at least two samples");
  }

  double x_front() const { return x0_; }
  double x_back() const { return x0_ + h_ * (y_.size() - 1); }

  double operator()(double x) const {
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(y_.size());
    const double t = (x - x0_) / h_;
    if (t <= 0.0) return y_.front();
    if (t >= static_cast<double>(n - 1)) return y_.back();
    if (n < 4) {
      const std::ptrdiff_t j =
          std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(t), n - 2);
      const double s = t - static_cast<double>(j);
      return (1.0 - s) * y_[j] + s * y_[j + 1];
    }
    std::ptrdiff_t j = static_cast<std::ptrdiff_t>(std::floor(t)) - 1;
    j = std::clamp<std::ptrdiff_t>(j, 0, n - 4);
    const double s = t - static_cast<double>(j);
    const double w0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
    const double w1 = s * (s - 2.0) * (s - 3.0) / 2.0;
    const double w2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
    const double w3 = s * (s - 1.0) * (s - 2.0) / 6.0;
    return w0 * y_[j] + w1 * y_[j + 1] + w2 * y_[j + 2] + w3 * y_[j + 3];
  }

 private:
  double x0_ = 0.0;
  double h_ = 1.0;
  std::vector<double> y_;
};

}  // namespace bosegas
