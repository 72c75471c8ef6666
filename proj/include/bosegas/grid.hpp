#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstring>
#include <vector>

#include <fftw3.h>

#include "bosegas/errors.hpp"

// Uniform periodic grids in two or three dimensions and the FFT workspace
// shared by the condensate solvers. Flat indexing is row-major with the last
// axis fastest. Plans use FFTW_ESTIMATE, whose heuristic choice is
// deterministic, so repeated runs produce identical bits.
namespace bosegas {

struct GridSpec {
  int dim = 3;
  std::array<int, 3> n{1, 1, 1};
  std::array<double, 3> length{1.0, 1.0, 1.0};
  std::array<double, 3> origin{0.0, 0.0, 0.0};

  static GridSpec torus(int dim, int points, double box = 1.0) {
    GridSpec g = base(dim, points, box);
    return g;
  }

  // Origin-centered box [-half_width, half_width) per axis.
  static GridSpec box(int dim, int points, double half_width) {
    GridSpec g = base(dim, points, 2.0 * half_width);
    for (int a = 0; a < dim; ++a) g.origin[a] = -half_width;
    return g;
  }

  std::size_t size() const {
    return static_cast<std::size_t>(n[0]) * static_cast<std::size_t>(n[1]) *
           static_cast<std::size_t>(n[2]);
  }
  double spacing(int axis) const { return length[axis] / n[axis]; }
  double cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) v *= spacing(a);
    return v;
  }
  double coordinate(int axis, int index) const {
    return origin[axis] + spacing(axis) * index;
  }
  // Signed Fourier wavenumber of index i on `axis`: (2 pi / L) * k with
  // k in (-n/2, n/2].
  double wavenumber(int axis, int index) const {
    const int half = n[axis] / 2;
    const int k = (index <= half) ? index : index - n[axis];
    const double two_pi = 6.283185307179586476925286766559;
    return two_pi * static_cast<double>(k) / length[axis];
  }
  std::array<int, 3> unflatten(std::size_t flat) const {
    const int iz = static_cast<int>(flat % n[2]);
    const int iy = static_cast<int>((flat / n[2]) % n[1]);
    const int ix = static_cast<int>(flat / (static_cast<std::size_t>(n[1]) * n[2]));
    return {ix, iy, iz};
  }
  bool centered_box() const {
    for (int a = 0; a < dim; ++a)
      if (std::abs(origin[a] + 0.5 * length[a]) > 1e-12 * length[a])
        return false;
    return true;
  }

 private:
  static GridSpec base(int dim, int points, double box) {
    if (dim != 2 && dim != 3) throw DomainError("grid dim must be 2 or 3");
    if (points < 4) throw DomainError("grid needs at least 4 points per axis");
    if (!(box > 0.0)) throw DomainError("box side must be positive");
    GridSpec g;
    g.dim = dim;
    for (int a = 0; a < dim; ++a) {
      g.n[a] = points;
      g.length[a] = box;
    }
    if (dim == 2) {
      g.n[2] = 1;
      g.length[2] = 1.0;
    }
    return g;
  }
};

class SpectralWorkspace {
 public:
  explicit SpectralWorkspace(const GridSpec& g) : grid_(g) {
    const std::size_t sz = g.size();
    buf_ = fftw_alloc_complex(sz);
    int dims[3] = {g.n[0], g.n[1], g.n[2]};
    fwd_ = fftw_plan_dft(g.dim, dims, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft(g.dim, dims, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (fwd_ == nullptr || bwd_ == nullptr)
      throw NumericalError("FFT planning failed");
    k2_.resize(sz);
    for (int a = 0; a < 3; ++a) kaxis_[a].assign(g.n[a], 0.0);
    for (int a = 0; a < g.dim; ++a)
      for (int i = 0; i < g.n[a]; ++i) kaxis_[a][i] = g.wavenumber(a, i);
    std::size_t flat = 0;
    for (int ix = 0; ix < g.n[0]; ++ix)
      for (int iy = 0; iy < g.n[1]; ++iy)
        for (int iz = 0; iz < g.n[2]; ++iz, ++flat) {
          const double kx = kaxis_[0][ix], ky = kaxis_[1][iy],
                       kz = kaxis_[2][iz];
          k2_[flat] = kx * kx + ky * ky + kz * kz;
        }
  }
  SpectralWorkspace(const SpectralWorkspace&) = delete;
  SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;
  ~SpectralWorkspace() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(buf_);
  }

  const GridSpec& grid() const { return grid_; }
  const std::vector<double>& k2() const { return k2_; }
  const std::vector<double>& kaxis(int axis) const { return kaxis_[axis]; }

  // In-place unnormalized forward transform.
  void forward(std::vector<std::complex<double>>& a) const {
    run(fwd_, a);
  }
  // In-place inverse transform, normalized by 1/size.
  void backward(std::vector<std::complex<double>>& a) const {
    run(bwd_, a);
    const double inv = 1.0 / static_cast<double>(grid_.size());
    for (auto& x : a) x *= inv;
  }

 private:
  void run(fftw_plan plan, std::vector<std::complex<double>>& a) const {
    if (a.size() != grid_.size())
      throw DomainError("field size does not match the grid");
    std::memcpy(buf_, a.data(), sizeof(fftw_complex) * a.size());
    fftw_execute(plan);
    std::memcpy(a.data(), buf_, sizeof(fftw_complex) * a.size());
  }

  GridSpec grid_;
  fftw_complex* buf_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
  std::vector<double> k2_;
  std::array<std::vector<double>, 3> kaxis_;
};

}  // namespace bosegas
