#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <cstring>
#include <vector>

#include "bosegas/gp.hpp"
#include "bosegas/grid.hpp"
#include "bosegas/rng.hpp"

namespace gp = bosegas::gp;
using bosegas::GridSpec;
using bosegas::SpectralWorkspace;
using gp::Field;

namespace {

double real_pairing(const GridSpec& g, const Field& a, const Field& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return g.cell_volume() * s;
}

// Centered finite difference of the energy along `dir`.
double fd_directional(const gp::GpProblem& p, const SpectralWorkspace& ws,
                      const Field& phi, const Field& dir, double t) {
  Field plus = phi, minus = phi;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    plus[i] += t * dir[i];
    minus[i] -= t * dir[i];
  }
  const double ep = gp::evaluate(p, ws, plus).energy.total;
  const double em = gp::evaluate(p, ws, minus).energy.total;
  return (ep - em) / (2.0 * t);
}

void check_gradient(const gp::GpProblem& p, const SpectralWorkspace& ws,
                    const Field& phi, int n_directions,
                    std::uint64_t seed_base) {
  const gp::GpEvaluation ev = gp::evaluate(p, ws, phi);
  for (int k = 0; k < n_directions; ++k) {
    const Field dir =
        gp::random_state(ws.grid(), bosegas::derive_seed(seed_base, k));
    const double fd = fd_directional(p, ws, phi, dir, 1e-5);
    const double lin = 2.0 * real_pairing(ws.grid(), ev.gradient, dir);
    INFO("direction " << k << " fd=" << fd << " lin=" << lin);
    REQUIRE(std::abs(fd - lin) <= 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

void check_breakdown_consistency(const gp::EnergyBreakdown& e) {
  const double sum = e.kinetic + e.external + e.interaction + e.rotation;
  REQUIRE(std::abs(sum - e.total) <= 1e-10 * std::max(1.0, std::abs(e.total)));
}

}  // namespace

TEST_CASE("quartic coupling constants match the frozen references") {
  // Values from tests/oracles/gp_constants.py.
  REQUIRE(gp::coupling_3d(0.1) ==
          Catch::Approx(1.256637061435917295385).epsilon(1e-15));
  REQUIRE(gp::coupling_3d(0.0) == 0.0);
  REQUIRE(gp::coupling_2d(1000.0, 0.01) ==
          Catch::Approx(5457.505415367365389943).epsilon(1e-12));
  REQUIRE(gp::coupling_2d(50.0, 0.05) ==
          Catch::Approx(302.1573427884795873085).epsilon(1e-12));

  REQUIRE_THROWS_AS(gp::coupling_3d(-0.2), bosegas::DomainError);
  REQUIRE_THROWS_AS(gp::coupling_2d(100.0, 0.1), bosegas::DomainError);  // n a^2 = 1
  REQUIRE_THROWS_AS(gp::coupling_2d(1e6, 0.01), bosegas::DomainError);   // n a^2 > 1
  REQUIRE_THROWS_AS(gp::coupling_2d(0.0, 0.01), bosegas::DomainError);
  REQUIRE_THROWS_AS(gp::coupling_2d(10.0, 0.0), bosegas::DomainError);
}

TEST_CASE("uniform minimizer on the unit torus reaches energy 4 pi a") {
  const GridSpec g = GridSpec::torus(3, 16, 1.0);
  const SpectralWorkspace ws(g);
  gp::GpProblem p;
  p.grid = g;
  p.coupling = gp::coupling_3d(0.1);

  const gp::MinimizeResult res =
      gp::minimize_gp(p, ws, gp::random_state(g, 7));
  REQUIRE(std::abs(res.energy.total - p.coupling) <= 1e-8);
  REQUIRE(std::abs(res.mu - 2.0 * p.coupling) <= 1e-7);
  REQUIRE(res.energy.kinetic <= 1e-9);
  REQUIRE(res.energy.external == 0.0);
  REQUIRE(res.energy.rotation == 0.0);
  REQUIRE(std::abs(gp::field_norm(g, res.phi) - 1.0) <= 1e-12);
  check_breakdown_consistency(res.energy);
}

TEST_CASE("harmonic trap without interaction reproduces the oscillator energy") {
  const GridSpec g = GridSpec::box(3, 32, 8.0);
  const SpectralWorkspace ws(g);
  gp::GpProblem p;
  p.grid = g;
  p.v_ext = gp::harmonic_potential(g);
  p.coupling = 0.0;

  const gp::MinimizeResult res =
      gp::minimize_gp(p, ws, gp::gaussian_state(g, 1.25));
  REQUIRE(std::abs(res.energy.total - 3.0) <= 1e-6);
  REQUIRE(std::abs(res.mu - 3.0) <= 1e-6);
  REQUIRE(res.energy.interaction == 0.0);
  check_breakdown_consistency(res.energy);
}

TEST_CASE("discrete gradient matches directional finite differences") {
  SECTION("trapped interacting problem") {
    const GridSpec g = GridSpec::box(3, 8, 3.0);
    const SpectralWorkspace ws(g);
    gp::GpProblem p;
    p.grid = g;
    p.v_ext = gp::harmonic_potential(g);
    p.coupling = 1.7;
    Field phi = gp::random_state(g, 11);
    for (std::complex<double>& x : phi) x *= 1.37;  // not normalized
    check_gradient(p, ws, phi, 5, 100);
  }
  SECTION("rotating frame") {
    const GridSpec g = GridSpec::box(3, 8, 3.0);
    const SpectralWorkspace ws(g);
    gp::GpProblem p;
    p.grid = g;
    p.v_ext = gp::harmonic_potential(g, 2.0);
    p.coupling = 0.9;
    p.omega = 0.9;
    check_gradient(p, ws, gp::random_state(g, 12), 5, 200);
  }
  SECTION("two dimensions with rotation") {
    const GridSpec g = GridSpec::box(2, 12, 3.0);
    const SpectralWorkspace ws(g);
    gp::GpProblem p;
    p.grid = g;
    p.v_ext = gp::harmonic_potential(g, 2.0);
    p.coupling = 0.9;
    p.omega = 0.7;
    check_gradient(p, ws, gp::random_state(g, 13), 5, 300);
  }
}

TEST_CASE("stationary states are fixed points of the descent step") {
  SECTION("uniform state on the torus") {
    const GridSpec g = GridSpec::torus(3, 8, 1.0);
    const SpectralWorkspace ws(g);
    gp::GpProblem p;
    p.grid = g;
    p.coupling = 0.7;
    const Field phi = gp::constant_state(g);
    const gp::GpEvaluation ev = gp::evaluate(p, ws, phi);
    REQUIRE(ev.residual <= 1e-13);
    const Field next = gp::descent_step(p, ws, phi, ev, 0.7);
    double max_diff = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i)
      max_diff = std::max(max_diff, std::abs(next[i] - phi[i]));
    REQUIRE(max_diff <= 1e-14);
  }
  SECTION("converged trap minimizer moves by at most the residual scale") {
    const GridSpec g = GridSpec::box(3, 16, 5.0);
    const SpectralWorkspace ws(g);
    gp::GpProblem p;
    p.grid = g;
    p.v_ext = gp::harmonic_potential(g);
    p.coupling = 1.0;
    const gp::MinimizeResult res =
        gp::minimize_gp(p, ws, gp::gaussian_state(g, 1.1));
    const gp::GpEvaluation ev = gp::evaluate(p, ws, res.phi);
    const Field next = gp::descent_step(p, ws, res.phi, ev, res.dt_final);
    double diff2 = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i)
      diff2 += std::norm(next[i] - res.phi[i]);
    REQUIRE(std::sqrt(g.cell_volume() * diff2) <= 1e-7);
  }
}

TEST_CASE("zero rotation speed delegates to the plain minimizer bitwise") {
  const GridSpec g = GridSpec::box(3, 12, 5.0);
  const SpectralWorkspace ws(g);
  gp::GpProblem p;
  p.grid = g;
  p.v_ext = gp::harmonic_potential(g);
  p.coupling = 0.8;
  p.omega = 0.0;
  const Field init = gp::gaussian_state(g, 1.1);
  const gp::MinimizeResult plain = gp::minimize_gp(p, ws, init);
  const gp::MinimizeResult rot = gp::minimize_gp_rotating(p, ws, init);
  REQUIRE(plain.energy.total == rot.energy.total);
  REQUIRE(plain.mu == rot.mu);
  REQUIRE(plain.iterations == rot.iterations);
  REQUIRE(std::memcmp(plain.phi.data(), rot.phi.data(),
                      plain.phi.size() * sizeof(std::complex<double>)) == 0);
}

TEST_CASE("slow rotation of an isotropic trap keeps the vortex-free state") {
  const GridSpec g = GridSpec::box(3, 24, 6.0);
  const SpectralWorkspace ws(g);
  gp::GpProblem p;
  p.grid = g;
  p.v_ext = gp::harmonic_potential(g);
  p.coupling = 0.0;
  p.omega = 0.5;

  const gp::MinimizeResult res =
      gp::minimize_gp_rotating(p, ws, gp::gaussian_state(g, 1.3));
  REQUIRE(std::abs(res.energy.total - 3.0) <= 1e-6);
  REQUIRE(std::abs(res.energy.rotation) <= 1e-7);
  check_breakdown_consistency(res.energy);

  // Density peaks at the trap center; a vortex would pit it.
  std::size_t argmax = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < res.phi.size(); ++i) {
    const double d = std::norm(res.phi[i]);
    if (d > best) {
      best = d;
      argmax = i;
    }
  }
  const auto idx = g.unflatten(argmax);
  REQUIRE(idx[0] == 12);
  REQUIRE(idx[1] == 12);
  REQUIRE(idx[2] == 12);
}

TEST_CASE("rotation faster than the trap is rejected as non-confining") {
  const GridSpec g = GridSpec::box(3, 16, 8.0);
  const SpectralWorkspace ws(g);
  gp::GpProblem p;
  p.grid = g;
  p.v_ext = gp::harmonic_potential(g);
  p.omega = 2.5;  // centrifugal term overwhelms the quadratic trap
  REQUIRE_THROWS_AS(
      gp::minimize_gp_rotating(p, ws, gp::gaussian_state(g, 1.0)),
      bosegas::ConfinementError);
}

TEST_CASE("two-dimensional uniform minimizer matches its coupling") {
  const GridSpec g = GridSpec::torus(2, 16, 1.0);
  const SpectralWorkspace ws(g);
  gp::GpProblem p;
  p.grid = g;
  p.coupling = gp::coupling_2d(1000.0, 0.01);

  const gp::MinimizeResult res =
      gp::minimize_gp(p, ws, gp::random_state(g, 3));
  REQUIRE(std::abs(res.energy.total - p.coupling) <= 1e-7 * p.coupling);
  REQUIRE(std::abs(res.mu - 2.0 * p.coupling) <= 1e-6 * p.coupling);
}

TEST_CASE("seeded initial states are reproducible") {
  const GridSpec g = GridSpec::torus(3, 8, 1.0);
  const Field a = gp::random_state(g, 42);
  const Field b = gp::random_state(g, 42);
  const Field c = gp::random_state(g, 43);
  REQUIRE(std::memcmp(a.data(), b.data(),
                      a.size() * sizeof(std::complex<double>)) == 0);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != c[i]) differs = true;
  REQUIRE(differs);
  REQUIRE(std::abs(gp::field_norm(g, a) - 1.0) <= 1e-12);
}

TEST_CASE("solver inputs are validated") {
  const GridSpec g = GridSpec::torus(3, 8, 1.0);
  const SpectralWorkspace ws(g);

  gp::GpProblem negative;
  negative.grid = g;
  negative.coupling = -1.0;
  REQUIRE_THROWS_AS(negative.validate(), bosegas::DomainError);

  gp::GpProblem mismatched;
  mismatched.grid = g;
  mismatched.v_ext.assign(7, 0.0);
  REQUIRE_THROWS_AS(mismatched.validate(), bosegas::GeometryError);

  gp::GpProblem other_grid;
  other_grid.grid = GridSpec::torus(3, 8, 2.0);
  REQUIRE_THROWS_AS(gp::evaluate(other_grid, ws, gp::constant_state(g)),
                    bosegas::GeometryError);

  gp::GpProblem ok;
  ok.grid = g;
  ok.coupling = 0.5;
  REQUIRE_THROWS_AS(gp::evaluate(ok, ws, Field(5, {1.0, 0.0})),
                    bosegas::GeometryError);
  REQUIRE_THROWS_AS(gp::minimize_gp(ok, ws, Field(g.size(), {0.0, 0.0})),
                    bosegas::NormalizationError);

  gp::GpProblem spinning = ok;
  spinning.omega = 0.5;
  REQUIRE_THROWS_AS(gp::minimize_gp(spinning, ws, gp::constant_state(g)),
                    bosegas::DomainError);
  // A torus is not an origin-centered box.
  REQUIRE_THROWS_AS(
      gp::minimize_gp_rotating(spinning, ws, gp::constant_state(g)),
      bosegas::GeometryError);

  REQUIRE_THROWS_AS(GridSpec::torus(1, 8), bosegas::DomainError);
  REQUIRE_THROWS_AS(GridSpec::box(3, 2, 1.0), bosegas::DomainError);
  Field zero(g.size(), {0.0, 0.0});
  REQUIRE_THROWS_AS(gp::normalize(g, zero), bosegas::NormalizationError);
}
