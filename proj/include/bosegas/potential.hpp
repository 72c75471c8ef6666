#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "bosegas/errors.hpp"
#include "bosegas/quadrature.hpp"

// Rotationally symmetric pair potentials v(r) >= 0 with compact support.
// Four kinds: an impenetrable core of radius R, a square barrier, a gaussian
// bump (truncated where it falls below 1e-14 of its peak, so the support is
// genuinely compact), and a tabulated piecewise-linear profile.
namespace bosegas {

class RadialPotential {
 public:
  enum class Kind { hard_core, square_well, gaussian, tabulated };

  static RadialPotential hard_core(double radius) {
    require(radius > 0.0 && std::isfinite(radius),
            "hard-core radius must be positive and finite");
    RadialPotential v;
    v.kind_ = Kind::hard_core;
    v.p1_ = radius;
    v.range_ = radius;
    return v;
  }

  // v(r) = v0 on [0, radius), 0 beyond.
  static RadialPotential square_well(double v0, double radius) {
    require(v0 >= 0.0 && std::isfinite(v0),
            "square-well strength must be non-negative and finite");
    require(radius > 0.0 && std::isfinite(radius),
            "square-well radius must be positive and finite");
    RadialPotential v;
    v.kind_ = Kind::square_well;
    v.p1_ = v0;
    v.p2_ = radius;
    v.range_ = radius;
    return v;
  }

  // v(r) = amplitude * exp(-(r/width)^2), truncated to zero where it drops
  // below 1e-14 * amplitude.
  static RadialPotential gaussian(double amplitude, double width) {
    require(amplitude >= 0.0 && std::isfinite(amplitude),
            "gaussian amplitude must be non-negative and finite");
    require(width > 0.0 && std::isfinite(width),
            "gaussian width must be positive and finite");
    RadialPotential v;
    v.kind_ = Kind::gaussian;
    v.p1_ = amplitude;
    v.p2_ = width;
    v.range_ = width * std::sqrt(-std::log(1e-14));
    return v;
  }

  // Piecewise-linear samples (r_i, v_i); r strictly increasing, v >= 0.
  // Below r_0 the value is clamped to v_0; beyond the last sample it is 0.
  static RadialPotential tabulated(std::vector<double> r,
                                   std::vector<double> v) {
    require(r.size() == v.size(), "tabulated r and v lengths differ");
    require(r.size() >= 2, "tabulated potential needs at least two samples");
    require(r.front() >= 0.0, "tabulated radii must be non-negative");
    for (std::size_t i = 0; i < r.size(); ++i) {
      require(std::isfinite(r[i]) && std::isfinite(v[i]),
              "tabulated samples must be finite");
      require(v[i] >= 0.0, "tabulated potential must be non-negative");
      if (i > 0)
        require(r[i] > r[i - 1], "tabulated radii must be strictly increasing");
    }
    RadialPotential out;
    out.kind_ = Kind::tabulated;
    out.table_r_ = std::move(r);
    out.table_v_ = std::move(v);
    // Support ends where the interpolant last returns to zero.
    std::size_t last_pos = out.table_r_.size();
    for (std::size_t i = out.table_r_.size(); i-- > 0;) {
      if (out.table_v_[i] > 0.0) {
        last_pos = i;
        break;
      }
    }
    if (last_pos == out.table_r_.size()) {
      out.range_ = 0.0;  // identically zero table
    } else if (last_pos + 1 < out.table_r_.size()) {
      out.range_ = out.table_r_[last_pos + 1];
    } else {
      out.range_ = out.table_r_.back();
    }
    return out;
  }

  Kind kind() const { return kind_; }
  const char* kind_name() const {
    switch (kind_) {
      case Kind::hard_core: return "hard-core";
      case Kind::square_well: return "square-well";
      case Kind::gaussian: return "gaussian";
      case Kind::tabulated: return "tabulated";
    }
    return "?";
  }
  bool evaluable() const { return kind_ != Kind::hard_core; }

  // Support radius: v(r) = 0 for all r > range(). For the hard core this is
  // the core radius itself.
  double range() const { return range_; }

  double core_radius() const {
    if (kind_ != Kind::hard_core)
      throw UnsupportedKind("core_radius: not a hard-core potential");
    return p1_;
  }

  double value(double r) const {
    switch (kind_) {
      case Kind::hard_core:
        throw UnsupportedKind(
            "hard-core potential has no finite pointwise values");
      case Kind::square_well:
        return (r < p2_) ? p1_ : 0.0;
      case Kind::gaussian:
        return (r <= range_) ? p1_ * std::exp(-(r / p2_) * (r / p2_)) : 0.0;
      case Kind::tabulated:
        return table_value(r);
    }
    return 0.0;
  }

  // Exact mean of v over the interval [lo, hi] (analytic for every kind, so
  // finite-difference stencils retain full order across jumps).
  double cell_average(double lo, double hi) const {
    if (!(hi > lo)) return 0.0;
    lo = std::max(lo, 0.0);
    switch (kind_) {
      case Kind::hard_core:
        throw UnsupportedKind(
            "hard-core potential has no finite pointwise values");
      case Kind::square_well: {
        const double overlap = std::max(0.0, std::min(hi, p2_) - lo);
        return p1_ * overlap / (hi - lo);
      }
      case Kind::gaussian: {
        const double sqrt_pi = 1.7724538509055160272981674833411;
        const double b = std::min(hi, range_);
        if (b <= lo) return 0.0;
        const double integral =
            p1_ * p2_ * (sqrt_pi / 2.0) * (std::erf(b / p2_) - std::erf(lo / p2_));
        return integral / (hi - lo);
      }
      case Kind::tabulated:
        return table_integral(lo, hi) / (hi - lo);
    }
    return 0.0;
  }

  // Second moment of the potential: integral of v(r) r^2 dr over all r.
  // The first-order (weak-coupling) approximation to the scattering length
  // is half of this value.
  double moment_r2() const {
    switch (kind_) {
      case Kind::hard_core:
        throw UnsupportedKind("hard-core potential is not integrable");
      case Kind::square_well:
        return p1_ * p2_ * p2_ * p2_ / 3.0;
      case Kind::gaussian: {
        const double sqrt_pi = 1.7724538509055160272981674833411;
        return p1_ * p2_ * p2_ * p2_ * sqrt_pi / 4.0;
      }
      case Kind::tabulated: {
        // Single-panel Simpson per segment is exact: v(r) r^2 is cubic on
        // each linear segment.
        std::vector<double> parts;
        const auto& r = table_r_;
        if (r.front() > 0.0) {
          parts.push_back(table_v_.front() * r.front() * r.front() * r.front() /
                          3.0);
        }
        for (std::size_t i = 0; i + 1 < r.size(); ++i) {
          const double a = r[i], b = r[i + 1], m = 0.5 * (a + b);
          const double fa = table_v_[i] * a * a;
          const double fm = table_value(m) * m * m;
          const double fb = table_v_[i + 1] * b * b;
          parts.push_back((b - a) / 6.0 * (fa + 4.0 * fm + fb));
        }
        return pairwise_sum(parts);
      }
    }
    return 0.0;
  }

  double born_scattering_length() const { return moment_r2() / 2.0; }

  // Length rescaling x -> n x with the compensating amplitude factor n^2:
  // returns the potential r -> n^2 v(n r).
  RadialPotential scaled(double n) const {
    if (!(n > 0.0) || !std::isfinite(n))
      throw DomainError("scale factor must be positive and finite");
    switch (kind_) {
      case Kind::hard_core:
        return hard_core(p1_ / n);
      case Kind::square_well:
        return square_well(n * n * p1_, p2_ / n);
      case Kind::gaussian:
        return gaussian(n * n * p1_, p2_ / n);
      case Kind::tabulated: {
        std::vector<double> r(table_r_), v(table_v_);
        for (auto& x : r) x /= n;
        for (auto& y : v) y *= n * n;
        return tabulated(std::move(r), std::move(v));
      }
    }
    return *this;
  }

  // Pure amplitude rescaling v -> c v (c > 0). A hard core is unchanged.
  RadialPotential amplitude_scaled(double c) const {
    if (!(c > 0.0) || !std::isfinite(c))
      throw DomainError("amplitude factor must be positive and finite");
    switch (kind_) {
      case Kind::hard_core:
        return *this;
      case Kind::square_well:
        return square_well(c * p1_, p2_);
      case Kind::gaussian:
        return gaussian(c * p1_, p2_);
      case Kind::tabulated: {
        std::vector<double> v(table_v_);
        for (auto& y : v) y *= c;
        return tabulated(table_r_, std::move(v));
      }
    }
    return *this;
  }

  // Largest spacing between consecutive table radii (0 for analytic kinds).
  double max_table_gap() const {
    if (kind_ != Kind::tabulated) return 0.0;
    double g = 0.0;
    for (std::size_t i = 0; i + 1 < table_r_.size(); ++i)
      g = std::max(g, table_r_[i + 1] - table_r_[i]);
    return g;
  }

  const std::vector<double>& table_r() const { return table_r_; }
  const std::vector<double>& table_v() const { return table_v_; }
  double param1() const { return p1_; }
  double param2() const { return p2_; }

 private:
  static void require(bool ok, const char* msg) {
    if (!ok) throw InvalidPotential(msg);
  }

  double table_value(double r) const {
    const auto& xs = table_r_;
    if (r <= xs.front()) return table_v_.front();
    if (r >= xs.back()) return 0.0;
    const auto it = std::upper_bound(xs.begin(), xs.end(), r);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
    const double t = (r - xs[i]) / (xs[i + 1] - xs[i]);
    return (1.0 - t) * table_v_[i] + t * table_v_[i + 1];
  }

  // Exact integral of the piecewise-linear interpolant over [lo, hi].
  double table_integral(double lo, double hi) const {
    const auto& xs = table_r_;
    double total = 0.0;
    if (lo < xs.front()) {
      const double b = std::min(hi, xs.front());
      total += table_v_.front() * (b - lo);
    }
    if (hi <= xs.front() || lo >= xs.back()) return total;
    auto it = std::upper_bound(xs.begin(), xs.end(), std::max(lo, xs.front()));
    std::size_t i = (it == xs.begin()) ? 0 : static_cast<std::size_t>(it - xs.begin()) - 1;
    for (; i + 1 < xs.size() && xs[i] < hi; ++i) {
      const double a = std::max(lo, xs[i]);
      const double b = std::min(hi, xs[i + 1]);
      if (b > a) total += 0.5 * (table_value(a) + table_value(b)) * (b - a);
    }
    return total;
  }

  Kind kind_ = Kind::square_well;
  double p1_ = 0.0;  // radius / strength / amplitude
  double p2_ = 0.0;  // radius / width
  double range_ = 0.0;
  std::vector<double> table_r_, table_v_;
};

}  // namespace bosegas
