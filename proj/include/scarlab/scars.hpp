#pragma once
// Detection and characterization of the anomalous eigenstate band.
//
// The period-2 crystal splits exactly across two real sectors: its symmetric
// combination lives at (k = 0, inversion +1) and its antisymmetric one at
// (k = L/2, inversion -1), and the band members alternate between the two.
// The canonical analysis therefore scatters the squared crystal overlap over
// the union of both sector spectra (raw overlaps: each sector carries 1/2,
// the union sums to 1) and walks the scattering-ladder energies as window
// centers: each window takes the candidate with the largest overlap.
//
// Derived quantities are pinned down so that near-degeneracies at E = 0
// cannot leak solver noise into results: the central window is excluded from
// the energy-deviation and participation averages by its ladder index (not
// by measured energy), and the band spacing is the mean adjacent spacing of
// the middle third of members, which telescopes to a two-endpoint formula.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "scarlab/basis.hpp"
#include "scarlab/common.hpp"
#include "scarlab/fsa.hpp"
#include "scarlab/spectral.hpp"
#include "scarlab/symmetry.hpp"

namespace scarlab {

struct ScatterPoint {
  double energy = 0.0;
  double overlap = 0.0;  // squared overlap with the reference state
  double pr2 = 0.0;      // sum |c|^4 over the eigenvector's own sector basis
  int momentum = 0;
  int parity = 0;
  std::size_t column = 0;  // eigenvector column within its sector spectrum
};

struct OverlapScatter {
  int L = 0;
  Word reference = 0;
  bool normalized = false;  // true: overlap with the sector-normalized
                            // embedding of the reference; false: raw
  std::vector<ScatterPoint> points;  // ascending energy
  double completeness = 0.0;         // sum of all overlaps
};

namespace detail {
inline double column_pr2(const SpectrumResult& spec, std::size_t col) {
  const std::size_t n = spec.dimension;
  double acc = 0.0;
  if (!spec.vectors.empty()) {
    for (std::size_t i = 0; i < n; ++i) {
      const double v = spec.vectors[i + col * n];
      acc += v * v * v * v;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const double v = std::norm(spec.vectors_c[i + col * n]);
      acc += v * v;
    }
  }
  return acc;
}

inline void append_sector_points(const SpectrumResult& spec,
                                 const SymmetrySector& sec, Word reference,
                                 bool normalized, OverlapScatter& out) {
  if (!spec.has_vectors()) {
    throw std::invalid_argument("overlap scatter needs eigenvectors");
  }
  const std::size_t ref_idx = sec.basis().index_of(reference);
  const std::uint32_t orbit = sec.orbit_of(ref_idx);
  const std::size_t n = spec.dimension;
  double weight = 0.0;  // |<reference|u_orbit>|^2
  if (orbit != kNoOrbit) weight = std::norm(sec.amplitude(ref_idx));
  if (normalized && weight == 0.0) {
    throw std::invalid_argument(
        "reference state carries no weight in this sector");
  }
  for (std::size_t col = 0; col < n; ++col) {
    ScatterPoint pt;
    pt.energy = spec.energies[col];
    pt.momentum = sec.momentum();
    pt.parity = sec.parity();
    pt.column = col;
    if (orbit == kNoOrbit) {
      pt.overlap = 0.0;
    } else if (!spec.vectors.empty()) {
      const double v = spec.vectors[orbit + col * n];
      pt.overlap = weight * v * v;
    } else {
      pt.overlap = weight * std::norm(spec.vectors_c[orbit + col * n]);
    }
    if (normalized) pt.overlap /= weight;
    pt.pr2 = column_pr2(spec, col);
    out.points.push_back(pt);
  }
}

inline void finish_scatter(OverlapScatter& out) {
  std::sort(out.points.begin(), out.points.end(),
            [](const ScatterPoint& a, const ScatterPoint& b) {
              if (a.energy != b.energy) return a.energy < b.energy;
              if (a.momentum != b.momentum) return a.momentum < b.momentum;
              return a.column < b.column;
            });
  out.completeness = 0.0;
  for (const auto& pt : out.points) out.completeness += pt.overlap;
}
}  // namespace detail

// Squared overlaps of one sector's eigenstates with a product state, against
// the normalized symmetric embedding of that state (so the scatter sums to
// one within the sector).
inline OverlapScatter overlap_scatter(const SpectrumResult& spec,
                                      const SymmetrySector& sec,
                                      Word reference) {
  OverlapScatter out;
  out.L = sec.length();
  out.reference = reference;
  out.normalized = true;
  detail::append_sector_points(spec, sec, reference, true, out);
  detail::finish_scatter(out);
  return out;
}

// The canonical two-sector union scatter for the period-2 crystal, with raw
// overlaps.  Also hands back the sectors and spectra so member eigenvectors
// can be embedded later.
struct BandScatter {
  OverlapScatter scatter;
  SymmetrySector zero_plus, pi_minus;
  SpectrumResult spec_zero_plus, spec_pi_minus;

  static const ConstrainedBasis& require_even(const ConstrainedBasis& basis) {
    if (basis.length() % 2 != 0) {
      throw std::invalid_argument(
          "crystal band analysis requires even length");
    }
    return basis;
  }

  BandScatter(const ConstrainedBasis& basis, std::size_t cap)
      : zero_plus(require_even(basis), 0, +1),
        pi_minus(basis, basis.length() / 2, -1) {
    spec_zero_plus = diagonalize(zero_plus, true, cap);
    spec_pi_minus = diagonalize(pi_minus, true, cap);
    const Word ref = z2_state(basis.length());
    scatter.L = basis.length();
    scatter.reference = ref;
    scatter.normalized = false;
    detail::append_sector_points(spec_zero_plus, zero_plus, ref, false,
                                 scatter);
    detail::append_sector_points(spec_pi_minus, pi_minus, ref, false, scatter);
    detail::finish_scatter(scatter);
  }

  // Full-basis embedding of the eigenvector behind a scatter point.
  std::vector<double> embed_point(const ScatterPoint& pt) const {
    const bool first = pt.momentum == 0;
    const SymmetrySector& sec = first ? zero_plus : pi_minus;
    const SpectrumResult& spec = first ? spec_zero_plus : spec_pi_minus;
    std::vector<double> col(spec.dimension);
    for (std::size_t i = 0; i < spec.dimension; ++i) {
      col[i] = spec.vectors[i + pt.column * spec.dimension];
    }
    return sec.embed_real(col);
  }
};

struct ScarBand {
  int L = 0;
  std::vector<std::size_t> members;  // scatter indices, window order
  std::size_t central_window = 0;    // ladder index of the E ~ 0 window
  double omega = 0.0;                // middle-third mean adjacent spacing
  double mean_abs_rel_energy_error = 0.0;  // vs window centers, central excl.
  double pr2_band_mean = 0.0;
  double pr2_bulk_mean = 0.0;
  double pr2_ratio = 0.0;
  double overlap_separation = 0.0;  // min member - max non-member overlap
};

// Window detection around the ladder energies: half-width is 40% of the
// smaller adjacent center gap, the member is the in-window candidate with
// the largest overlap.  Empty windows and duplicate picks abort: they mean
// the scatter does not actually carry a band at these centers.
inline ScarBand detect_band(const OverlapScatter& scatter,
                            const std::vector<double>& centers) {
  if (centers.size() < 3) {
    throw std::invalid_argument("need at least three window centers");
  }
  ScarBand band;
  band.L = scatter.L;
  band.central_window = centers.size() / 2;
  const auto& pts = scatter.points;
  std::vector<char> taken(pts.size(), 0);
  for (std::size_t j = 0; j < centers.size(); ++j) {
    double gap = 0.0;
    if (j > 0) gap = centers[j] - centers[j - 1];
    if (j + 1 < centers.size()) {
      const double g = centers[j + 1] - centers[j];
      gap = gap == 0.0 ? g : std::min(gap, g);
    }
    const double hw = 0.4 * gap;
    std::size_t best = pts.size();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (std::abs(pts[i].energy - centers[j]) >= hw) continue;
      if (best == pts.size() || pts[i].overlap > pts[best].overlap) best = i;
    }
    if (best == pts.size()) {
      throw ConsistencyError("empty detection window at energy " +
                             std::to_string(centers[j]));
    }
    if (taken[best]) {
      throw ConsistencyError("windows picked the same state twice near " +
                             std::to_string(centers[j]));
    }
    taken[best] = 1;
    band.members.push_back(best);
  }

  // Spacing from the middle third of members (sorted by energy): the mean
  // adjacent spacing telescopes, so interior identities cannot perturb it.
  std::vector<double> me;
  me.reserve(band.members.size());
  for (std::size_t m : band.members) me.push_back(pts[m].energy);
  std::sort(me.begin(), me.end());
  const std::size_t n = me.size();
  const std::size_t lo = n / 3, hi = n - n / 3;
  band.omega = (me[hi - 1] - me[lo]) / static_cast<double>(hi - 1 - lo);

  // Energy deviation from the window centers, skipping the central window by
  // ladder index so E ~ 0 denominators never enter.
  double rel = 0.0;
  std::size_t relcount = 0;
  for (std::size_t j = 0; j < centers.size(); ++j) {
    if (j == band.central_window) continue;
    const double e = pts[band.members[j]].energy;
    rel += std::abs((e - centers[j]) / e);
    ++relcount;
  }
  band.mean_abs_rel_energy_error = rel / static_cast<double>(relcount);

  // Participation enhancement: band members against the mid-spectrum bulk
  // (middle two thirds of the energy span, exact zero modes and the band
  // itself excluded).
  const double scale =
      std::max(std::abs(pts.front().energy), std::abs(pts.back().energy));
  const double span = pts.back().energy - pts.front().energy;
  const double mid_lo = pts.front().energy + span / 6.0;
  const double mid_hi = pts.back().energy - span / 6.0;
  double band_acc = 0.0;
  std::size_t band_count = 0;
  for (std::size_t j = 0; j < centers.size(); ++j) {
    if (j == band.central_window) continue;
    const auto& pt = pts[band.members[j]];
    if (std::abs(pt.energy) <= 1e-10 * scale) continue;
    band_acc += pt.pr2;
    ++band_count;
  }
  double bulk_acc = 0.0;
  std::size_t bulk_count = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (taken[i]) continue;
    if (pts[i].energy < mid_lo || pts[i].energy > mid_hi) continue;
    if (std::abs(pts[i].energy) <= 1e-10 * scale) continue;
    bulk_acc += pts[i].pr2;
    ++bulk_count;
  }
  if (band_count == 0 || bulk_count == 0) {
    throw ConsistencyError("participation averages have no support");
  }
  band.pr2_band_mean = band_acc / static_cast<double>(band_count);
  band.pr2_bulk_mean = bulk_acc / static_cast<double>(bulk_count);
  band.pr2_ratio = band.pr2_band_mean / band.pr2_bulk_mean;

  // Overlap separation between the band and everything else.
  double min_member = std::numeric_limits<double>::infinity();
  double max_other = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (taken[i]) {
      min_member = std::min(min_member, pts[i].overlap);
    } else {
      max_other = std::max(max_other, pts[i].overlap);
    }
  }
  band.overlap_separation = min_member - max_other;
  return band;
}

// Independent cross-check: walk points by descending overlap, keep those at
// least min_spacing away from every earlier pick, stop at count.  Returns
// ascending scatter indices.
inline std::vector<std::size_t> greedy_band(const OverlapScatter& scatter,
                                            std::size_t count,
                                            double min_spacing) {
  const auto& pts = scatter.points;
  std::vector<std::size_t> order(pts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (pts[a].overlap != pts[b].overlap) {
      return pts[a].overlap > pts[b].overlap;
    }
    return a < b;
  });
  std::vector<std::size_t> picks;
  for (std::size_t i : order) {
    bool clear = true;
    for (std::size_t g : picks) {
      if (std::abs(pts[i].energy - pts[g].energy) < min_spacing) {
        clear = false;
        break;
      }
    }
    if (clear) {
      picks.push_back(i);
      if (picks.size() == count) break;
    }
  }
  std::sort(picks.begin(), picks.end());
  return picks;
}

}  // namespace scarlab
