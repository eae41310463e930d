#pragma once

// The constrained-flip Hamiltonian H = sum_i P X_i P (unit Rabi coefficient),
// its raising/lowering split H = H+ + H-, and the staggered on-site field
// S = sum_i (-1)^i Z_i.
//
// H+ is defined by the grading property: acting on a product state it raises
// the Hamming distance to Z2 by exactly one. A flip at site i raises the
// distance iff site i currently agrees with Z2 there. H- is the transpose.

#include <cstdint>
#include <vector>

#include "scarlab/basis.hpp"
#include "scarlab/common.hpp"

namespace scarlab {

enum class OperatorKind { H, HPlus, HMinus, StaggeredZ };

struct OperatorSpec {
  OperatorKind kind = OperatorKind::H;
  double stagger_amplitude = 0.0;  // coefficient of sum_i (-1)^i Z_i, added for kind H
                                   // or standing alone for kind StaggeredZ
};

// Diagonal of the staggered field on one configuration: sum_i (-1)^i z_i
// with z_i = 2 n_i - 1.
inline int staggered_diagonal(Word s, int L) {
  int v = 0;
  for (int i = 0; i < L; ++i) {
    int z = ((s >> i) & 1) ? 1 : -1;
    v += (i % 2 == 0) ? z : -z;
  }
  return v;
}

// Matrix-free application; out += op * in. The off-diagonal part enumerates
// allowed flips per source state, so cost is O(D * L) and no matrix is stored.
template <typename Scalar>
void apply_operator(const OperatorSpec& spec, const ConstrainedBasis& basis,
                    const Scalar* in, Scalar* out) {
  const int L = basis.length();
  const Word z2 = z2_state(L);
  const bool plus_only = spec.kind == OperatorKind::HPlus;
  const bool minus_only = spec.kind == OperatorKind::HMinus;
  const bool flips = spec.kind != OperatorKind::StaggeredZ;
  const bool diag = spec.kind == OperatorKind::StaggeredZ ||
                    (spec.kind == OperatorKind::H && spec.stagger_amplitude != 0.0);
  const double lambda =
      spec.kind == OperatorKind::StaggeredZ
          ? (spec.stagger_amplitude != 0.0 ? spec.stagger_amplitude : 1.0)
          : spec.stagger_amplitude;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const Word s = basis.state(j);
    const Scalar a = in[j];
    if (diag) out[j] += lambda * staggered_diagonal(s, L) * a;
    if (!flips) continue;
    basis.for_each_flip(s, [&](int i, Word t) {
      // The flip raises the distance iff site i of s agrees with Z2; in that
      // case t belongs to H+ * s, i.e. the matrix element sits in row(t).
      bool raising = ((s >> i) & 1) == ((z2 >> i) & 1);
      if (plus_only && !raising) return;
      if (minus_only && raising) return;
      out[basis.index_of(t)] += a;
    });
  }
}

template <typename Scalar>
std::vector<Scalar> apply_operator(const OperatorSpec& spec, const ConstrainedBasis& basis,
                                   const std::vector<Scalar>& in) {
  if (in.size() != basis.size())
    throw std::invalid_argument("apply_operator: vector length does not match basis dimension");
  std::vector<Scalar> out(in.size(), Scalar(0));
  apply_operator(spec, basis, in.data(), out.data());
  return out;
}

// Compressed sparse rows; used for dense-free kernels, Krylov evolution and
// exact-arithmetic elimination (values are small integers in those cases).
struct SparseOperator {
  std::size_t dimension = 0;
  std::vector<std::size_t> row_start;  // size dimension + 1
  std::vector<std::size_t> col;
  std::vector<double> val;

  template <typename Scalar>
  void apply(const Scalar* in, Scalar* out) const {
    for (std::size_t r = 0; r < dimension; ++r) {
      Scalar acc(0);
      for (std::size_t p = row_start[r]; p < row_start[r + 1]; ++p) acc += val[p] * in[col[p]];
      out[r] = acc;
    }
  }
};

inline SparseOperator assemble(const OperatorSpec& spec, const ConstrainedBasis& basis) {
  const int L = basis.length();
  const Word z2 = z2_state(L);
  SparseOperator op;
  op.dimension = basis.size();
  op.row_start.assign(basis.size() + 1, 0);
  const bool plus_only = spec.kind == OperatorKind::HPlus;
  const bool minus_only = spec.kind == OperatorKind::HMinus;
  const bool flips = spec.kind != OperatorKind::StaggeredZ;
  const bool diag = spec.kind == OperatorKind::StaggeredZ ||
                    (spec.kind == OperatorKind::H && spec.stagger_amplitude != 0.0);
  const double lambda =
      spec.kind == OperatorKind::StaggeredZ
          ? (spec.stagger_amplitude != 0.0 ? spec.stagger_amplitude : 1.0)
          : spec.stagger_amplitude;
  // Row r collects matrix elements <r|op|c>: off-diagonals enumerated from the
  // source column c, so pass 1 counts entries per row, pass 2 fills them.
  std::vector<std::size_t> fill(basis.size(), 0);
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t c = 0; c < basis.size(); ++c) {
      const Word s = basis.state(c);
      auto emit = [&](std::size_t r, double v) {
        if (pass == 0) {
          ++op.row_start[r + 1];
        } else {
          std::size_t p = op.row_start[r] + fill[r]++;
          op.col[p] = c;
          op.val[p] = v;
        }
      };
      if (diag) emit(c, lambda * staggered_diagonal(s, L));
      if (flips)
        basis.for_each_flip(s, [&](int i, Word t) {
          bool raising = ((s >> i) & 1) == ((z2 >> i) & 1);
          if (plus_only && !raising) return;
          if (minus_only && raising) return;
          emit(basis.index_of(t), 1.0);
        });
    }
    if (pass == 0) {
      for (std::size_t r = 0; r < basis.size(); ++r) op.row_start[r + 1] += op.row_start[r];
      op.col.assign(op.row_start.back(), 0);
      op.val.assign(op.row_start.back(), 0.0);
    }
  }
  return op;
}

inline std::pair<SparseOperator, SparseOperator> decompose_pm(const ConstrainedBasis& basis) {
  if (basis.boundary() == Boundary::PBC && basis.length() % 2 != 0)
    throw std::invalid_argument("raising/lowering split needs even L under PBC");
  return {assemble({OperatorKind::HPlus}, basis), assemble({OperatorKind::HMinus}, basis)};
}

// Particle-hole operation: multiply each product-state amplitude by
// (-1)^(number of ground sites). It anticommutes with H, so the spectrum is
// symmetric about zero.
template <typename Scalar>
void apply_particle_hole(const ConstrainedBasis& basis, std::vector<Scalar>& v) {
  if (v.size() != basis.size())
    throw std::invalid_argument("apply_particle_hole: vector length mismatch");
  const int L = basis.length();
  for (std::size_t j = 0; j < basis.size(); ++j)
    if ((L - excitation_count(basis.state(j))) % 2 != 0) v[j] = -v[j];
}

}  // namespace scarlab
