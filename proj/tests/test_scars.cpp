#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "scarlab/basis.hpp"
#include "scarlab/fsa.hpp"
#include "scarlab/scars.hpp"
#include "scarlab/spectral.hpp"

using namespace scarlab;

TEST_CASE("two-sector scatter captures the crystal completely", "[scars]") {
  ConstrainedBasis basis(12, Boundary::PBC);
  BandScatter bs(basis, dense_cap());
  REQUIRE(bs.scatter.points.size() ==
          bs.zero_plus.size() + bs.pi_minus.size());
  // the period-2 crystal splits half/half between the two sectors
  REQUIRE_THAT(bs.scatter.completeness,
               Catch::Matchers::WithinAbs(1.0, 1e-10));
  REQUIRE(std::is_sorted(
      bs.scatter.points.begin(), bs.scatter.points.end(),
      [](const ScatterPoint& a, const ScatterPoint& b) {
        return a.energy < b.energy;
      }));
  for (const auto& p : bs.scatter.points) {
    REQUIRE(p.overlap >= 0.0);
    REQUIRE(p.overlap <= 0.5 + 1e-12);
    REQUIRE(p.pr2 > 0.0);
    REQUIRE(p.pr2 <= 1.0 + 1e-12);
  }
  REQUIRE_THROWS_AS(BandScatter(ConstrainedBasis(11, Boundary::PBC),
                                dense_cap()),
                    std::invalid_argument);
}

TEST_CASE("embedded scatter eigenvectors solve the full problem", "[scars]") {
  ConstrainedBasis basis(10, Boundary::PBC);
  BandScatter bs(basis, dense_cap());
  const std::size_t zref = basis.index_of(z2_state(10));
  for (std::size_t i : {std::size_t(0), bs.scatter.points.size() / 2,
                        bs.scatter.points.size() - 1}) {
    const auto& pt = bs.scatter.points[i];
    const auto full = bs.embed_point(pt);
    const auto hv = apply_operator({}, basis, full);
    double norm = 0.0;
    for (std::size_t j = 0; j < full.size(); ++j) {
      REQUIRE_THAT(hv[j],
                   Catch::Matchers::WithinAbs(pt.energy * full[j], 1e-9));
      norm += full[j] * full[j];
    }
    REQUIRE_THAT(norm, Catch::Matchers::WithinAbs(1.0, 1e-10));
    // the recorded overlap is the raw squared amplitude on the crystal
    REQUIRE_THAT(full[zref] * full[zref],
                 Catch::Matchers::WithinAbs(pt.overlap, 1e-12));
  }
}

TEST_CASE("band detection reproduces frozen references", "[scars]") {
  const struct {
    int L;
    std::size_t members;
    double omega, ratio;
  } cases[] = {{12, 13, 1.332889306369138, 1.027354833662469},
               {16, 17, 1.326523368632781, 1.472288057420113}};
  for (const auto& c : cases) {
    ConstrainedBasis basis(c.L, Boundary::PBC);
    const auto f = run_fsa(basis);
    BandScatter bs(basis, dense_cap());
    const auto band = detect_band(bs.scatter, f.energies);
    INFO("L=" << c.L);
    REQUIRE(band.members.size() == c.members);
    REQUIRE_THAT(band.omega, Catch::Matchers::WithinAbs(c.omega, 1e-9));
    REQUIRE_THAT(band.pr2_ratio, Catch::Matchers::WithinAbs(c.ratio, 1e-9));
    REQUIRE(band.pr2_ratio > 1.0);
    REQUIRE(band.central_window == band.members.size() / 2);
    // members carry larger crystal weight than any other state nearby in
    // energy; globally they are the top-overlap picks
    const auto greedy =
        greedy_band(bs.scatter, band.members.size(), 0.7 * band.omega);
    auto sorted_members = band.members;
    std::sort(sorted_members.begin(), sorted_members.end());
    REQUIRE(greedy == sorted_members);
  }
}

TEST_CASE("band members alternate between the two sectors", "[scars]") {
  const int L = 12;
  ConstrainedBasis basis(L, Boundary::PBC);
  const auto f = run_fsa(basis);
  BandScatter bs(basis, dense_cap());
  const auto band = detect_band(bs.scatter, f.energies);
  // top of the ladder sits at k = 0; moving down alternates the sector
  for (std::size_t w = 0; w < band.members.size(); ++w) {
    const auto& pt = bs.scatter.points[band.members[w]];
    const int expected_k = w % 2 == 0 ? 0 : L / 2;
    REQUIRE(pt.momentum == expected_k);
  }
}

TEST_CASE("normalized single-sector scatter sums to one", "[scars]") {
  ConstrainedBasis basis(12, Boundary::PBC);
  SymmetrySector sec(basis, 0, +1);
  const auto spec = diagonalize(sec, true);
  const auto sc = overlap_scatter(spec, sec, z2_state(12));
  REQUIRE(sc.points.size() == sec.size());
  REQUIRE(sc.normalized);
  REQUIRE_THAT(sc.completeness, Catch::Matchers::WithinAbs(1.0, 1e-10));
}

TEST_CASE("window detection needs enough ladder centers", "[scars]") {
  ConstrainedBasis basis(12, Boundary::PBC);
  BandScatter bs(basis, dense_cap());
  REQUIRE_THROWS_AS(detect_band(bs.scatter, {0.0, 1.0}),
                    std::invalid_argument);
}
