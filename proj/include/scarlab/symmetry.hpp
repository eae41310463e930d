#pragma once
// Translation / inversion symmetry reduction for the periodic constrained
// chain.
//
// On a ring the Hamiltonian commutes with the translation T (rotate bits left)
// and with the site inversion R (bit reversal, i -> L-1-i).  Basis states are
// grouped into orbits of the symmetry group; each orbit contributes at most
// one vector to a given sector.  Momenta k = 0 and k = L/2 admit an inversion
// parity label (+1 / -1) and produce real sectors; every other momentum gives
// a complex sector without a parity label.
//
// The symmetrized vector attached to an orbit with representative a is
//
//   |u_a> = N^{-1/2} sum_g chi(g)^* |g a>,
//
// where g runs over T^r (r = 0..L-1) and, when a parity is requested, over
// T^r R as well; chi(T^r) = exp(i 2 pi k r / L) and chi(T^r R) = parity *
// chi(T^r).  Orbits whose accumulated norm vanishes drop out of the sector.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "scarlab/basis.hpp"
#include "scarlab/common.hpp"
#include "scarlab/hamiltonian.hpp"

namespace scarlab {

// Sentinel for "this full-basis state belongs to no orbit of the sector".
inline constexpr std::uint32_t kNoOrbit =
    std::numeric_limits<std::uint32_t>::max();

class SymmetrySector {
 public:
  // momentum: integer k in [0, L).  parity: +1 / -1, or 0 for "no inversion
  // label".  A nonzero parity is only defined where k and -k coincide, i.e.
  // k = 0 or (even L) k = L/2.
  SymmetrySector(const ConstrainedBasis& basis, int momentum, int parity = 0)
      : basis_(&basis),
        momentum_(momentum),
        parity_(parity),
        length_(basis.length()) {
    if (basis.boundary() != Boundary::PBC) {
      throw std::invalid_argument(
          "symmetry sectors require periodic boundaries");
    }
    if (momentum_ < 0 || momentum_ >= length_) {
      throw std::invalid_argument("momentum index out of range: " +
                                  std::to_string(momentum_));
    }
    if (parity_ != 0 && parity_ != 1 && parity_ != -1) {
      throw std::invalid_argument("inversion parity must be +1, -1 or 0");
    }
    if (parity_ != 0 && (2 * momentum_) % length_ != 0) {
      throw std::invalid_argument(
          "inversion parity is only defined at k = 0 and k = L/2");
    }
    real_ = (2 * momentum_) % length_ == 0;
    build();
  }

  int length() const { return length_; }
  int momentum() const { return momentum_; }
  int parity() const { return parity_; }
  bool real() const { return real_; }
  std::size_t size() const { return reps_.size(); }
  const ConstrainedBasis& basis() const { return *basis_; }

  Word representative(std::size_t a) const { return reps_[a]; }
  const std::vector<Word>& representatives() const { return reps_; }

  // Orbit slot of a full-basis state, or kNoOrbit if its orbit dropped out.
  std::uint32_t orbit_of(std::size_t full_index) const {
    return orbit_[full_index];
  }

  // Coefficient of full-basis state j inside the normalized vector of its
  // orbit; zero when the state carries no weight (including dropped orbits).
  std::complex<double> amplitude(std::size_t full_index) const {
    return amplitude_[full_index];
  }
  double amplitude_real(std::size_t full_index) const {
    return amplitude_[full_index].real();
  }

  // Number of distinct basis states in the group orbit of representative a.
  const std::vector<std::uint32_t>& orbit_sizes() const { return orbit_sizes_; }

  // |v_full> = sum_a v_a |u_a>
  std::vector<std::complex<double>> embed(
      const std::vector<std::complex<double>>& v) const {
    check_sector_dim(v.size());
    std::vector<std::complex<double>> full(basis_->size(), 0.0);
    for (std::size_t j = 0; j < full.size(); ++j) {
      if (orbit_[j] != kNoOrbit) full[j] = amplitude_[j] * v[orbit_[j]];
    }
    return full;
  }

  // Real sectors map real sector vectors to real full vectors.
  std::vector<double> embed_real(const std::vector<double>& v) const {
    check_sector_dim(v.size());
    if (!real_) {
      throw std::invalid_argument("embed_real requires a real sector");
    }
    std::vector<double> full(basis_->size(), 0.0);
    for (std::size_t j = 0; j < full.size(); ++j) {
      if (orbit_[j] != kNoOrbit) {
        full[j] = amplitude_[j].real() * v[orbit_[j]];
      }
    }
    return full;
  }

  // w_a = <u_a | v_full>
  std::vector<std::complex<double>> project(
      const std::vector<std::complex<double>>& v) const {
    if (v.size() != basis_->size()) {
      throw std::invalid_argument("project: full vector has wrong dimension");
    }
    std::vector<std::complex<double>> w(reps_.size(), 0.0);
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (orbit_[j] != kNoOrbit) {
        w[orbit_[j]] += std::conj(amplitude_[j]) * v[j];
      }
    }
    return w;
  }

  std::vector<double> project_real(const std::vector<double>& v) const {
    if (v.size() != basis_->size()) {
      throw std::invalid_argument("project: full vector has wrong dimension");
    }
    if (!real_) {
      throw std::invalid_argument("project_real requires a real sector");
    }
    std::vector<double> w(reps_.size(), 0.0);
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (orbit_[j] != kNoOrbit) w[orbit_[j]] += amplitude_[j].real() * v[j];
    }
    return w;
  }

 private:
  void check_sector_dim(std::size_t n) const {
    if (n != reps_.size()) {
      throw std::invalid_argument("sector vector has wrong dimension");
    }
  }

  void build() {
    const std::size_t dim = basis_->size();
    const int L = length_;
    orbit_.assign(dim, kNoOrbit);
    amplitude_.assign(dim, 0.0);
    std::vector<bool> visited(dim, false);

    // Scratch for one orbit: distinct states with accumulated coefficients.
    std::vector<Word> st;
    std::vector<std::complex<double>> coef;
    st.reserve(2 * static_cast<std::size_t>(L));
    coef.reserve(2 * static_cast<std::size_t>(L));
    const double step = -2.0 * M_PI * momentum_ / L;

    auto add = [&](Word s, std::complex<double> c) {
      for (std::size_t m = 0; m < st.size(); ++m) {
        if (st[m] == s) {
          coef[m] += c;
          return;
        }
      }
      st.push_back(s);
      coef.push_back(c);
    };

    for (std::size_t j = 0; j < dim; ++j) {
      if (visited[j]) continue;
      // Ascending iteration makes the first unvisited member the orbit
      // minimum, so representatives come out canonical for free.
      const Word a = basis_->state(j);
      st.clear();
      coef.clear();
      const Word ra = reflect(a, L);
      for (int r = 0; r < L; ++r) {
        // chi(g)^*: at k = 0 and k = L/2 the characters are exactly +-1, so
        // evaluate them with integer parity instead of trig.
        const std::complex<double> phase =
            real_ ? std::complex<double>(
                        (momentum_ == 0 || r % 2 == 0) ? 1.0 : -1.0, 0.0)
                  : std::polar(1.0, step * r);
        add(rotate_left(a, L, r), phase);
        if (parity_ != 0) {
          add(rotate_left(ra, L, r), static_cast<double>(parity_) * phase);
        }
      }
      double norm2 = 0.0;
      for (const auto& c : coef) norm2 += std::norm(c);
      const std::size_t members = st.size();
      bool keep = norm2 > 1e-9;  // exact cancellations land at ~1e-30
      std::uint32_t slot = kNoOrbit;
      if (keep) {
        slot = static_cast<std::uint32_t>(reps_.size());
        reps_.push_back(a);
        orbit_sizes_.push_back(static_cast<std::uint32_t>(members));
      }
      const double inv = keep ? 1.0 / std::sqrt(norm2) : 0.0;
      for (std::size_t m = 0; m < members; ++m) {
        const std::size_t idx = basis_->index_of(st[m]);
        visited[idx] = true;
        if (keep) {
          orbit_[idx] = slot;
          amplitude_[idx] = coef[m] * inv;
        }
      }
    }
  }

  const ConstrainedBasis* basis_;
  int momentum_;
  int parity_;
  int length_;
  bool real_;
  std::vector<Word> reps_;
  std::vector<std::uint32_t> orbit_;
  std::vector<std::complex<double>> amplitude_;
  std::vector<std::uint32_t> orbit_sizes_;
};

// Dense sector Hamiltonian <u_a| H |u_b>, column-major, for a real sector.
// The staggered field does not commute with translation, so only the plain
// kinetic operator can be pushed into a sector.
inline std::vector<double> sector_matrix(const SymmetrySector& sec) {
  if (!sec.real()) {
    throw std::invalid_argument("sector_matrix requires a real sector");
  }
  const ConstrainedBasis& basis = sec.basis();
  const std::size_t m = sec.size();
  std::vector<double> mat(m * m, 0.0);
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const std::uint32_t b = sec.orbit_of(j);
    if (b == kNoOrbit) continue;
    const double aj = sec.amplitude_real(j);
    if (aj == 0.0) continue;
    basis.for_each_flip(basis.state(j), [&](int, Word target) {
      const std::size_t tj = basis.index_of(target);
      const std::uint32_t a = sec.orbit_of(tj);
      if (a == kNoOrbit) return;
      mat[a + b * m] += sec.amplitude_real(tj) * aj;
    });
  }
  return mat;
}

inline std::vector<std::complex<double>> sector_matrix_complex(
    const SymmetrySector& sec) {
  const ConstrainedBasis& basis = sec.basis();
  const std::size_t m = sec.size();
  std::vector<std::complex<double>> mat(m * m, 0.0);
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const std::uint32_t b = sec.orbit_of(j);
    if (b == kNoOrbit) continue;
    const std::complex<double> aj = sec.amplitude(j);
    if (aj == std::complex<double>(0.0, 0.0)) continue;
    basis.for_each_flip(basis.state(j), [&](int, Word target) {
      const std::size_t tj = basis.index_of(target);
      const std::uint32_t a = sec.orbit_of(tj);
      if (a == kNoOrbit) return;
      mat[a + b * m] += std::conj(sec.amplitude(tj)) * aj;
    });
  }
  return mat;
}

// Momentum-resolved dimensions (no parity label), plus the parity-resolved
// splits where they exist.  Dimensions over all momenta sum to the full
// constrained dimension.
struct SectorDimensions {
  int L = 0;
  std::vector<std::size_t> momentum;  // index k = 0..L-1
  std::size_t zero_plus = 0, zero_minus = 0;  // k = 0 split
  std::size_t pi_plus = 0, pi_minus = 0;      // k = L/2 split (even L)
};

inline SectorDimensions sector_dimensions(const ConstrainedBasis& basis) {
  SectorDimensions out;
  out.L = basis.length();
  out.momentum.resize(static_cast<std::size_t>(out.L));
  for (int k = 0; k < out.L; ++k) {
    out.momentum[static_cast<std::size_t>(k)] =
        SymmetrySector(basis, k).size();
  }
  out.zero_plus = SymmetrySector(basis, 0, +1).size();
  out.zero_minus = SymmetrySector(basis, 0, -1).size();
  if (out.L % 2 == 0) {
    out.pi_plus = SymmetrySector(basis, out.L / 2, +1).size();
    out.pi_minus = SymmetrySector(basis, out.L / 2, -1).size();
  }
  return out;
}

}  // namespace scarlab
