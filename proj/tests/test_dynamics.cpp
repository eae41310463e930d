#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "scarlab/basis.hpp"
#include "scarlab/dynamics.hpp"

using namespace scarlab;

TEST_CASE("quench starts from the correct initial data", "[dynamics]") {
  ConstrainedBasis basis(12, Boundary::PBC);
  QuenchOptions opt;
  opt.tmax = 1.0;
  opt.dt = 0.5;
  const auto run = quench(basis, z2_state(12), opt);
  REQUIRE(run.t.front() == 0.0);
  REQUIRE(run.t.size() == 3);
  REQUIRE_THAT(run.fidelity.front(), Catch::Matchers::WithinAbs(1.0, 1e-12));
  // the period-2 crystal anti-correlates every bond
  REQUIRE_THAT(run.correlator.front(),
               Catch::Matchers::WithinAbs(-1.0, 1e-12));
  // a product state carries no entanglement
  REQUIRE_THAT(run.entropy.front(), Catch::Matchers::WithinAbs(0.0, 1e-10));
}

TEST_CASE("evolution is unitary and conserves energy", "[dynamics]") {
  ConstrainedBasis basis(14, Boundary::PBC);
  QuenchOptions opt;
  opt.tmax = 20.0;
  opt.dt = 0.2;
  const auto run = quench(basis, z2_state(14), opt);
  REQUIRE(run.max_norm_error < 1e-8);
  REQUIRE(run.max_energy_drift < 1e-8);
  for (double f : run.fidelity) {
    REQUIRE(f >= 0.0);
    REQUIRE(f <= 1.0 + 1e-9);
  }
}

TEST_CASE("propagation methods agree", "[dynamics]") {
  ConstrainedBasis basis(10, Boundary::PBC);
  QuenchOptions opt;
  opt.tmax = 5.0;
  opt.dt = 0.5;

  opt.method = EvolveMethod::Krylov;
  const auto krylov = quench(basis, z2_state(10), opt);
  opt.method = EvolveMethod::SpectralFull;
  const auto full = quench(basis, z2_state(10), opt);
  opt.method = EvolveMethod::SpectralSectors;
  const auto sectors = quench(basis, z2_state(10), opt);

  for (std::size_t i = 0; i < krylov.t.size(); ++i) {
    REQUIRE_THAT(full.fidelity[i],
                 Catch::Matchers::WithinAbs(krylov.fidelity[i], 1e-8));
    REQUIRE_THAT(full.correlator[i],
                 Catch::Matchers::WithinAbs(krylov.correlator[i], 1e-8));
    REQUIRE_THAT(full.entropy[i],
                 Catch::Matchers::WithinAbs(krylov.entropy[i], 1e-8));
    REQUIRE_THAT(sectors.fidelity[i],
                 Catch::Matchers::WithinAbs(full.fidelity[i], 1e-8));
    REQUIRE_THAT(sectors.correlator[i],
                 Catch::Matchers::WithinAbs(full.correlator[i], 1e-8));
    REQUIRE_THAT(sectors.entropy[i],
                 Catch::Matchers::WithinAbs(full.entropy[i], 1e-8));
  }
}

TEST_CASE("the mirrored crystal evolves identically", "[dynamics]") {
  // reflection symmetry maps one crystal onto the other, so every recorded
  // observable matches point by point
  ConstrainedBasis basis(12, Boundary::PBC);
  QuenchOptions opt;
  opt.tmax = 8.0;
  opt.dt = 0.4;
  const auto a = quench(basis, z2_state(12), opt);
  const auto b = quench(basis, z2_prime_state(12), opt);
  for (std::size_t i = 0; i < a.t.size(); ++i) {
    REQUIRE_THAT(a.fidelity[i],
                 Catch::Matchers::WithinAbs(b.fidelity[i], 1e-9));
    REQUIRE_THAT(a.correlator[i],
                 Catch::Matchers::WithinAbs(b.correlator[i], 1e-9));
    REQUIRE_THAT(a.entropy[i], Catch::Matchers::WithinAbs(b.entropy[i], 1e-9));
  }
}

TEST_CASE("frozen oscillation analysis at sixteen sites", "[dynamics]") {
  ConstrainedBasis basis(16, Boundary::PBC);
  QuenchOptions opt;
  opt.tmax = 30.0;
  opt.dt = 0.1;
  const auto run = quench(basis, z2_state(16), opt);
  const auto osc = oscillation_analysis(run, 0.0, 30.0);
  REQUIRE_THAT(osc.period_correlator,
               Catch::Matchers::WithinAbs(2.3583, 0.02));
  REQUIRE_THAT(osc.period_entropy_residual / osc.period_correlator,
               Catch::Matchers::WithinAbs(1.0, 0.05));
  REQUIRE_THAT(osc.entropy_slope, Catch::Matchers::WithinAbs(0.0496, 0.005));
  REQUIRE(osc.residual_rms > 0.0);
}

TEST_CASE("superposed crystals carry one bit of entanglement", "[dynamics]") {
  const int L = 8;
  ConstrainedBasis basis(L, Boundary::PBC);
  std::vector<std::complex<double>> psi(basis.size(), 0.0);
  psi[basis.index_of(z2_state(L))] = 1.0 / std::sqrt(2.0);
  psi[basis.index_of(z2_prime_state(L))] = 1.0 / std::sqrt(2.0);
  for (int cut : {2, 4, 6}) {
    REQUIRE_THAT(entanglement_entropy(psi, basis, cut),
                 Catch::Matchers::WithinAbs(std::log(2.0), 1e-10));
  }
  std::vector<std::complex<double>> product(basis.size(), 0.0);
  product[basis.index_of(z2_state(L))] = 1.0;
  REQUIRE_THAT(entanglement_entropy(product, basis, 4),
               Catch::Matchers::WithinAbs(0.0, 1e-12));
}

TEST_CASE("invalid evolution requests are rejected", "[dynamics]") {
  ConstrainedBasis basis(8, Boundary::PBC);
  QuenchOptions opt;
  opt.tmax = 1.0;
  opt.dt = 2.0;  // step longer than the whole window
  REQUIRE_THROWS_AS(quench(basis, z2_state(8), opt), std::invalid_argument);

  opt.dt = 0.5;
  opt.entropy_cut = 8;  // cut must be strictly inside the chain
  REQUIRE_THROWS_AS(quench(basis, z2_state(8), opt), std::invalid_argument);

  std::vector<std::complex<double>> psi(basis.size(), 0.0);
  psi[0] = 1.0;
  REQUIRE_THROWS_AS(entanglement_entropy(psi, basis, 0),
                    std::invalid_argument);

  opt.entropy_cut = -1;
  opt.method = EvolveMethod::SpectralFull;
  opt.cap = 10;  // dimension exceeds the dense budget
  REQUIRE_THROWS_AS(quench(basis, z2_state(8), opt), CapacityError);
}

TEST_CASE("oscillation analysis validates its window", "[dynamics]") {
  ConstrainedBasis basis(8, Boundary::PBC);
  QuenchOptions opt;
  opt.tmax = 6.0;
  opt.dt = 0.5;
  const auto run = quench(basis, z2_state(8), opt);
  REQUIRE_THROWS_AS(oscillation_analysis(run, 3.0, 3.0),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(oscillation_analysis(run, 0.0, 6.0, 10.0),
                    std::invalid_argument);
}
