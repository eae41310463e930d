#pragma once
// Dense diagonalization and spectral analyses: bulk level statistics against
// the standard spacing distributions, numeric zero-mode counting, and the
// bipartite-lattice lower bound on the kernel dimension.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "scarlab/basis.hpp"
#include "scarlab/common.hpp"
#include "scarlab/hamiltonian.hpp"
#include "scarlab/linalg.hpp"
#include "scarlab/symmetry.hpp"

namespace scarlab {

struct SpectrumResult {
  int L = 0;
  Boundary boundary = Boundary::PBC;
  bool full_basis = true;
  int momentum = 0;
  int parity = 0;  // 0 = no inversion label
  double stagger = 0.0;
  std::size_t dimension = 0;
  std::vector<double> energies;                  // ascending
  std::vector<double> vectors;                   // column-major (real path)
  std::vector<std::complex<double>> vectors_c;   // column-major (complex path)

  bool has_vectors() const { return !vectors.empty() || !vectors_c.empty(); }
};

namespace detail {
inline void check_cap(std::size_t dim, std::size_t cap) {
  if (dim > cap) {
    throw CapacityError("dense dimension " + std::to_string(dim) +
                        " exceeds cap " + std::to_string(cap) +
                        " (set SCARLAB_DENSE_CAP to raise it)");
  }
}
}  // namespace detail

// Dense matrix of an operator over the full constrained basis, column-major.
inline std::vector<double> dense_matrix(const ConstrainedBasis& basis,
                                        const OperatorSpec& spec = {}) {
  const std::size_t dim = basis.size();
  std::vector<double> mat(dim * dim, 0.0);
  const SparseOperator op = assemble(spec, basis);
  for (std::size_t row = 0; row < dim; ++row) {
    for (std::size_t p = op.row_start[row]; p < op.row_start[row + 1]; ++p) {
      mat[row + op.col[p] * dim] = op.val[p];
    }
  }
  return mat;
}

inline SpectrumResult diagonalize_full(const ConstrainedBasis& basis,
                                       const OperatorSpec& spec = {},
                                       bool vectors = true,
                                       std::size_t cap = dense_cap()) {
  detail::check_cap(basis.size(), cap);
  SpectrumResult out;
  out.L = basis.length();
  out.boundary = basis.boundary();
  out.full_basis = true;
  out.momentum = -1;
  out.stagger = spec.kind == OperatorKind::H ? spec.stagger_amplitude : 0.0;
  out.dimension = basis.size();
  out.vectors = dense_matrix(basis, spec);
  sym_eig(out.vectors, out.dimension, out.energies, vectors);
  if (!vectors) out.vectors.clear();
  return out;
}

inline SpectrumResult diagonalize(const SymmetrySector& sector,
                                  bool vectors = true,
                                  std::size_t cap = dense_cap()) {
  detail::check_cap(sector.size(), cap);
  SpectrumResult out;
  out.L = sector.length();
  out.boundary = Boundary::PBC;
  out.full_basis = false;
  out.momentum = sector.momentum();
  out.parity = sector.parity();
  out.dimension = sector.size();
  if (sector.real()) {
    out.vectors = sector_matrix(sector);
    sym_eig(out.vectors, out.dimension, out.energies, vectors);
    if (!vectors) out.vectors.clear();
  } else {
    out.vectors_c = sector_matrix_complex(sector);
    herm_eig(out.vectors_c, out.dimension, out.energies, vectors);
    if (!vectors) out.vectors_c.clear();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Level statistics
// ---------------------------------------------------------------------------

// Bulk index window [lo, hi): lower edge at D/5, upper edge at D/2 shifted
// down by an offset that scales with the dimension (500 levels at the largest
// single-sector dimension handled here, 77436).
inline std::pair<std::size_t, std::size_t> bulk_window(std::size_t dimension) {
  const std::size_t lo = dimension / 5;
  const auto offset = static_cast<std::size_t>(
      std::llround(500.0 * static_cast<double>(dimension) / 77436.0));
  const std::size_t half = dimension / 2;
  const std::size_t hi = half > offset ? half - offset : 0;
  return {lo, hi};
}

struct LevelStatistics {
  std::size_t window_lo = 0, window_hi = 0;
  std::size_t count = 0;
  double ks_poisson = 0.0;
  double ks_semi_poisson = 0.0;
  double ks_wigner_dyson = 0.0;
  double r_mean = 0.0;
  double mean_raw_unfolded_spacing = 0.0;
  std::vector<double> spacings;  // unfolded, normalized to unit mean, sorted
};

// Kolmogorov-Smirnov style distances of the unfolded spacing sample to the
// Poisson, semi-Poisson and Wigner-Dyson surmise distributions, plus the
// unfolding-free <r> gap-ratio average over the same window.
inline LevelStatistics level_statistics(const std::vector<double>& energies,
                                        std::size_t lo, std::size_t hi,
                                        int unfold_degree = 9) {
  if (hi > energies.size() || lo >= hi) {
    throw std::invalid_argument("level_statistics: bad index window");
  }
  if (hi - lo < 100) {
    throw std::invalid_argument(
        "level_statistics: window holds fewer than 100 levels");
  }
  LevelStatistics out;
  out.window_lo = lo;
  out.window_hi = hi;
  out.count = hi - lo;

  std::vector<double> w(energies.begin() + static_cast<long>(lo),
                        energies.begin() + static_cast<long>(hi));
  std::vector<double> staircase(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    staircase[i] = static_cast<double>(lo + i);
  }
  const Polynomial fit = fit_polynomial(w, staircase, unfold_degree);

  std::vector<double> s;
  s.reserve(w.size());
  double prev = fit(w[0]);
  for (std::size_t i = 1; i < w.size(); ++i) {
    const double cur = fit(w[i]);
    const double gap = cur - prev;
    if (gap > 0.0) s.push_back(gap);  // unfolding can fold tiny gaps negative
    prev = cur;
  }
  if (s.size() < 2) {
    throw ConsistencyError("level_statistics: unfolding left no spacings");
  }
  double mean = 0.0;
  for (double v : s) mean += v;
  mean /= static_cast<double>(s.size());
  out.mean_raw_unfolded_spacing = mean;
  for (double& v : s) v /= mean;
  std::sort(s.begin(), s.end());

  const auto n = static_cast<double>(s.size());
  auto ks = [&](auto cdf) {
    double worst = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double empirical = static_cast<double>(i + 1) / n;
      worst = std::max(worst, std::abs(empirical - cdf(s[i])));
    }
    return worst;
  };
  out.ks_poisson = ks([](double t) { return 1.0 - std::exp(-t); });
  out.ks_semi_poisson =
      ks([](double t) { return 1.0 - (1.0 + 2.0 * t) * std::exp(-2.0 * t); });
  out.ks_wigner_dyson =
      ks([](double t) { return 1.0 - std::exp(-M_PI * t * t / 4.0); });

  // <r> uses the raw (not unfolded) gaps inside the window.
  double rsum = 0.0;
  std::size_t rcount = 0;
  for (std::size_t i = lo + 1; i + 1 < hi; ++i) {
    const double g0 = energies[i] - energies[i - 1];
    const double g1 = energies[i + 1] - energies[i];
    const double hi_g = std::max(g0, g1);
    if (hi_g > 0.0) {
      rsum += std::min(g0, g1) / hi_g;
      ++rcount;
    }
  }
  out.r_mean = rcount > 0 ? rsum / static_cast<double>(rcount) : 0.0;
  out.spacings = std::move(s);
  return out;
}

// ---------------------------------------------------------------------------
// Zero modes (numeric side) and the bipartite counting bound
// ---------------------------------------------------------------------------

// Number of eigenvalues within 1e-10 * max|E| of zero.
inline std::size_t numeric_zero_modes(const std::vector<double>& energies) {
  if (energies.empty()) return 0;
  const double scale =
      std::max(std::abs(energies.front()), std::abs(energies.back()));
  const double tol = 1e-10 * std::max(scale, 1.0);
  std::size_t count = 0;
  for (double e : energies) {
    if (std::abs(e) <= tol) ++count;
  }
  return count;
}

// The kinetic operator only connects states whose excitation numbers differ
// by one, so the adjacency graph is bipartite in the parity of the excitation
// count and the kernel dimension is at least |#even - #odd|.
inline std::size_t imbalance_bound(const ConstrainedBasis& basis) {
  long long acc = 0;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    acc += basis.hamming(j) % 2 == 0 ? 1 : -1;
  }
  return static_cast<std::size_t>(acc < 0 ? -acc : acc);
}

// Excitation parity is invariant under translation and inversion, so the same
// bound applies sector by sector.
inline std::size_t imbalance_bound(const SymmetrySector& sector) {
  long long acc = 0;
  for (std::size_t a = 0; a < sector.size(); ++a) {
    const Word rep = sector.representative(a);
    acc += excitation_count(rep) % 2 == 0 ? 1 : -1;
  }
  return static_cast<std::size_t>(acc < 0 ? -acc : acc);
}

// ---------------------------------------------------------------------------
// Synthetic control spectra for validating the statistics pipeline
// ---------------------------------------------------------------------------

// Sorted i.i.d. uniform levels: an uncorrelated (Poisson) spectrum.
inline std::vector<double> poisson_levels(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, static_cast<double>(n));
  std::vector<double> e(n);
  for (double& v : e) v = uni(rng);
  std::sort(e.begin(), e.end());
  return e;
}

// Spectrum of one dense GOE matrix: Wigner-Dyson spaced bulk.
inline std::vector<double> goe_levels(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> a(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double g = gauss(rng);
      a[i + j * n] = i == j ? g * std::sqrt(2.0) : g;
      a[j + i * n] = a[i + j * n];
    }
  }
  std::vector<double> w;
  sym_eig(a, n, w, false);
  return w;
}

}  // namespace scarlab
