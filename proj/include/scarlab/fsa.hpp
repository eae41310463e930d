#pragma once
// Forward-scattering approximation.
//
// Starting from the period-2 crystal |0> = |Z2>, repeated application of the
// raising half H+ (normalized at each step) builds a ladder of L+1 vectors
// |0> .. |L> graded by the flip distance from Z2; vector |n> is supported
// exactly on the basis states whose word differs from the Z2 word in n bits.
// Projecting the Hamiltonian onto the ladder gives a symmetric tridiagonal
// matrix with off-diagonal beta_n = ||H+ |n>||, whose eigenpairs approximate
// the special eigenstate band of the full model.
//
// The per-step leakage err(n) = | ||H- |n>||^2 / beta_{n-1}^2 - 1 | measures
// how far the lowering half fails to retrace the ladder: it vanishes when
// H- |n> is proportional to |n-1>.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "scarlab/basis.hpp"
#include "scarlab/common.hpp"
#include "scarlab/linalg.hpp"

namespace scarlab {

struct FsaResult {
  int L = 0;
  std::vector<double> beta;        // beta_0 .. beta_{L-1}
  std::vector<double> step_error;  // err(0) = 0, err(1) .. err(L)
  double closure_residual = 0.0;   // ||H+ |L>||, exactly zero by grading
  std::vector<double> energies;    // L+1 ladder eigenvalues, ascending
  std::vector<double> modes;       // (L+1) x (L+1) eigenvectors, column-major
  // Ladder vectors in sparse form: support[n] lists full-basis indices of
  // layer n (ascending) and coeff[n] the matching amplitudes.
  std::vector<std::vector<std::uint32_t>> support;
  std::vector<std::vector<double>> coeff;

  double mean_error() const {
    double acc = 0.0;
    for (double e : step_error) acc += e;
    return acc / static_cast<double>(step_error.size());
  }
  double max_error() const {
    double worst = 0.0;
    for (double e : step_error) worst = std::max(worst, e);
    return worst;
  }
};

inline FsaResult run_fsa(const ConstrainedBasis& basis) {
  if (basis.boundary() != Boundary::PBC) {
    throw std::invalid_argument("the scattering ladder requires a ring");
  }
  const int L = basis.length();
  if (L % 2 != 0) {
    throw std::invalid_argument(
        "the period-2 starting crystal requires even length");
  }
  const Word ref = z2_state(L);
  const std::size_t dim = basis.size();

  FsaResult out;
  out.L = L;
  out.beta.reserve(static_cast<std::size_t>(L));
  out.step_error.reserve(static_cast<std::size_t>(L) + 1);
  out.support.resize(static_cast<std::size_t>(L) + 1);
  out.coeff.resize(static_cast<std::size_t>(L) + 1);

  out.support[0] = {static_cast<std::uint32_t>(basis.index_of(ref))};
  out.coeff[0] = {1.0};
  out.step_error.push_back(0.0);

  // Dense scratch reused across steps; `touched` tracks which entries of
  // `acc` hold live data so clearing stays proportional to the layer size.
  std::vector<double> acc(dim, 0.0);
  std::vector<char> touched(dim, 0);
  std::vector<std::uint32_t> order;

  // Accumulate op|layer> into (order, acc); raising selects flips at sites
  // where the word still agrees with the reference, lowering the others.
  auto apply_half = [&](const std::vector<std::uint32_t>& sup,
                        const std::vector<double>& val, bool raising) {
    order.clear();
    for (std::size_t m = 0; m < sup.size(); ++m) {
      const Word s = basis.state(sup[m]);
      const double c = val[m];
      basis.for_each_flip(s, [&](int site, Word target) {
        const bool agrees = ((s >> site) & 1u) == ((ref >> site) & 1u);
        if (agrees != raising) return;
        const auto t = static_cast<std::uint32_t>(basis.index_of(target));
        if (!touched[t]) {
          touched[t] = 1;
          order.push_back(t);
        }
        acc[t] += c;
      });
    }
  };
  auto collect_norm = [&]() {
    double norm2 = 0.0;
    for (std::uint32_t t : order) norm2 += acc[t] * acc[t];
    return std::sqrt(norm2);
  };
  auto clear_scratch = [&]() {
    for (std::uint32_t t : order) {
      acc[t] = 0.0;
      touched[t] = 0;
    }
  };

  for (int n = 0; n < L; ++n) {
    const auto un = static_cast<std::size_t>(n);
    apply_half(out.support[un], out.coeff[un], true);
    const double b = collect_norm();
    if (!(b > 0.0)) {
      throw ConsistencyError("scattering ladder broke off at step " +
                             std::to_string(n));
    }
    out.beta.push_back(b);
    std::sort(order.begin(), order.end());
    auto& sup = out.support[un + 1];
    auto& val = out.coeff[un + 1];
    sup.assign(order.begin(), order.end());
    val.resize(sup.size());
    for (std::size_t m = 0; m < sup.size(); ++m) val[m] = acc[sup[m]] / b;
    clear_scratch();

    // Leakage of the lowering half on the fresh vector.
    apply_half(sup, val, false);
    double down2 = 0.0;
    for (std::uint32_t t : order) down2 += acc[t] * acc[t];
    out.step_error.push_back(std::abs(down2 / (b * b) - 1.0));
    clear_scratch();
  }

  // The top of the ladder is the mirrored crystal; raising must annihilate.
  apply_half(out.support[static_cast<std::size_t>(L)],
             out.coeff[static_cast<std::size_t>(L)], true);
  out.closure_residual = collect_norm();
  clear_scratch();
  if (out.closure_residual > 1e-10) {
    throw ConsistencyError("scattering ladder failed to close");
  }

  // Projected tridiagonal model: zero diagonal, beta off-diagonal.
  out.energies.assign(static_cast<std::size_t>(L) + 1, 0.0);
  std::vector<double> off(out.beta);
  tridiag_eig(out.energies, off, &out.modes);
  return out;
}

// Squared overlaps of the ladder eigenmodes with the starting crystal:
// |<Z2|mode_j>|^2 is just the squared first component.
inline std::vector<double> fsa_reference_overlaps(const FsaResult& fsa) {
  const std::size_t n = fsa.energies.size();
  std::vector<double> ov(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double c = fsa.modes[0 + j * n];
    ov[j] = c * c;
  }
  return ov;
}

// Ladder eigenmode j as a vector over the full constrained basis.
inline std::vector<double> fsa_embedded_mode(const FsaResult& fsa,
                                             const ConstrainedBasis& basis,
                                             std::size_t j) {
  const std::size_t n = fsa.energies.size();
  if (j >= n) throw std::invalid_argument("mode index out of range");
  std::vector<double> full(basis.size(), 0.0);
  for (std::size_t layer = 0; layer < n; ++layer) {
    const double c = fsa.modes[layer + j * n];
    const auto& sup = fsa.support[layer];
    const auto& val = fsa.coeff[layer];
    for (std::size_t m = 0; m < sup.size(); ++m) full[sup[m]] += c * val[m];
  }
  return full;
}

// Layer-resolved profile |<n|psi>|^2 of an arbitrary full-basis vector.
inline std::vector<double> fsa_profile(const FsaResult& fsa,
                                       const std::vector<double>& psi) {
  std::vector<double> prof(fsa.energies.size(), 0.0);
  for (std::size_t layer = 0; layer < prof.size(); ++layer) {
    const auto& sup = fsa.support[layer];
    const auto& val = fsa.coeff[layer];
    double dot = 0.0;
    for (std::size_t m = 0; m < sup.size(); ++m) dot += val[m] * psi[sup[m]];
    prof[layer] = dot * dot;
  }
  return prof;
}

}  // namespace scarlab
