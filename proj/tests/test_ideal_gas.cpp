#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bosegas/ideal_gas.hpp"

using namespace bosegas;
using namespace bosegas::ideal_gas;

namespace {
constexpr double kFourPi = 12.566370614359172953850573533118;
}

TEST_CASE("zeta(3/2) series with tail correction") {
  // Frozen from tests/oracles/thermo_constants.py (mpmath, 40 digits).
  CHECK(std::abs(zeta_three_halves() - 2.612375348685488343349) <= 1e-12);
}

TEST_CASE("critical point of the free gas") {
  CHECK(std::abs(critical_density(1.0) - 0.05864362134764442187285) <= 1e-12);
  CHECK(std::abs(critical_beta(0.1) - 0.7006167574309872383085) <= 1e-12);

  // Inverse relations and the scaling law beta_c ~ rho^{-2/3}.
  for (double rho : {0.03, 0.1, 0.8, 5.0}) {
    const double bc = critical_beta(rho);
    CHECK(critical_density(bc) == Catch::Approx(rho).epsilon(1e-12));
    CHECK(bc * std::pow(rho, 2.0 / 3.0) ==
          Catch::Approx(critical_beta(1.0)).epsilon(1e-12));
  }
  // Monotone decreasing in beta.
  double prev = critical_density(0.25);
  for (double beta : {0.5, 1.0, 2.0, 4.0}) {
    const double cur = critical_density(beta);
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK_THROWS_AS(critical_density(0.0), DomainError);
  CHECK_THROWS_AS(critical_beta(-1.0), DomainError);
}

TEST_CASE("shell counts match the first radii") {
  const auto c = shell_counts(9);
  CHECK(c[0] == 1);
  CHECK(c[1] == 6);
  CHECK(c[2] == 12);
  CHECK(c[3] == 8);
  CHECK(c[4] == 6);
  CHECK(c[5] == 24);
  CHECK(c[6] == 24);
  CHECK(c[7] == 0);
  CHECK(c[8] == 12);
  CHECK(c[9] == 30);
}

TEST_CASE("chemical potential at fixed density on a finite torus") {
  // Frozen from tests/oracles/thermo_constants.py: beta = 1, rho = 2 rho_c(1),
  // L = 8.
  const double rho = 2.0 * 0.05864362134764442187285;
  const auto ts = TorusSpec::make(8.0, 1.0);
  const auto sol = solve_mu(ts, rho);
  CHECK(sol.mu == Catch::Approx(-0.02219702289209550568651).epsilon(1e-8));
  CHECK(sol.rho0 / rho ==
        Catch::Approx(0.7419174646147878598011).epsilon(1e-9));
  CHECK(sol.residual <= 1e-10);
  CHECK(sol.mu < 0.0);

  // The retained shell table is converged: doubling the exponent cutoff
  // moves the density by less than 1e-12 relative.
  const auto ts2 = TorusSpec::make(8.0, 1.0, 120.0);
  CHECK(std::abs(density(ts2, sol.mu) - density(ts, sol.mu)) <=
        1e-12 * rho);
}

TEST_CASE("condensate fraction extrapolates toward one half at two rho_c") {
  const double rho = 2.0 * critical_density(1.0);
  const double f8 = condensate_fraction(TorusSpec::make(8.0, 1.0), rho);
  const double f16 = condensate_fraction(TorusSpec::make(16.0, 1.0), rho);
  CHECK(f8 > 0.5);   // finite-size excess
  CHECK(f16 > 0.5);
  CHECK(f16 < f8);   // shrinking toward the limit
  const double extrap = condensate_fraction_extrapolated(1.0, rho, 8.0);
  CHECK(std::abs(extrap - 0.5) <= 2e-2);
  CHECK(condensate_fraction_infinite(1.0, rho) == Catch::Approx(0.5));
  CHECK(condensate_fraction_infinite(1.0, 0.5 * critical_density(1.0)) == 0.0);
}

TEST_CASE("free energy of the unit torus") {
  // Frozen from tests/oracles/thermo_constants.py: beta = 0.5, n = 5.
  const double f0 = free_energy_ideal(0.5, 5.0);
  CHECK(f0 == Catch::Approx(-5.406734533148536341485).epsilon(1e-10));

  // Increasing in beta (dF/dbeta = entropy / beta^2 >= 0).
  double prev = free_energy_ideal(0.25, 5.0);
  for (double beta : {0.5, 1.0, 2.0}) {
    const double cur = free_energy_ideal(beta, 5.0);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("interaction correction lies in its a priori window") {
  const double beta = 0.5, n = 5.0;
  const double f0 = free_energy_ideal(beta, n);
  for (double a : {0.002, 0.01, 0.05}) {
    const double fgp = free_energy_gp(beta, n, a);
    const double delta = fgp - f0;
    CHECK(delta >= kFourPi * a * n - 1e-12);
    CHECK(delta <= 2.0 * kFourPi * a * n + 1e-12);
  }
  CHECK(free_energy_gp(beta, n, 0.0) == Catch::Approx(f0));
}

TEST_CASE("ideal gas input validation") {
  const auto ts = TorusSpec::make(4.0, 1.0);
  CHECK_THROWS_AS(solve_mu(ts, 0.0), DomainError);
  CHECK_THROWS_AS(density(ts, 0.5), DomainError);
  CHECK_THROWS_AS(bose_factor(0.0), DomainError);
  CHECK_THROWS_AS(TorusSpec::make(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(free_energy_gp(0.5, 5.0, -0.1), DomainError);
}
