#pragma once

// Discrete orthogonality measures for the q-families: support lattices,
// weights, numerical orthogonality verification, analytic position-operator
// spectra, and comparison against truncated Jacobi spectra.

#include <vector>

#include "qosc/polynomials.hpp"

namespace qosc {

struct WeightedAtom {
  double point = 0.0;
  double weight = 0.0;
};

// Atom list of the family's orthogonality measure.  I-type lattices are
// one-sided geometric (k >= 0) reflected through 0; II-type lattices are
// two-sided (k ranges over a window of integers) reflected through 0.
struct DiscreteMeasure {
  FamilyKind kind = FamilyKind::discrete_I;
  std::vector<WeightedAtom> atoms;  // sorted by descending |point|, +/- paired
  double scale = 1.0;               // lattice scale: |point| = scale * b^k
  double lattice_c = 1.0;           // II-type only
  int k_max = 0;
  int k_lo = 0, k_hi = 0;           // retained k window after weight cutoff
};

// Throws RestrictionError for generalized families off their restriction:
// the closed-form weights certify orthogonality only on the restriction.
DiscreteMeasure build_measure(const PolynomialFamily& fam, int k_max);

struct OrthogonalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_gap = 0.0;
  bool tail_ok = true;  // k_max window captured the mass needed for tol
};

// Lattice sum of weighted transition-coefficient products against the
// closed-form right side (delta_{mn} for I-type; the printed infinite-product
// constant times delta_{mn} for II-type).
OrthogonalityCheck verify_orthogonality(const PolynomialFamily& fam, int m,
                                        int n, int k_max);

struct SpectrumLattice {
  bool applicable = true;   // false for the classical (continuous) case
  std::vector<double> points;  // signed, sorted descending by |.|
  bool accumulates_at_zero = true;
  double scale = 1.0;
  int k_lo = 0, k_hi = 0;  // emitted k range (II-type is doubly infinite)
};

SpectrumLattice analytic_spectrum(const PolynomialFamily& fam, int k_range = 40);

struct SpectrumMatchRow {
  int dim = 0;
  std::vector<double> rel_gaps;  // top-|.| eigenvalues vs lattice (I-type)
  int near_zero_count = 0;       // eigenvalues inside (-0.1, 0.1)
  double smallest_abs = 0.0;     // smallest |eigenvalue|
};

// Truncated Jacobi eigenvalues against the analytic lattice at dims
// dim/4, dim/2, dim.  I-type: top_k largest-|.| matches with relative gaps.
// II-type: both ends of the truncated spectrum grow without bound and do not
// pair with lattice points at finite dim, so the row reports the near-zero
// census instead; the truncated spectra keep a gap around zero even though
// the analytic lattice accumulates there.
struct SpectraComparison {
  bool applicable = true;
  std::vector<SpectrumMatchRow> rows;
  bool gaps_shrink = false;  // I-type: worst gap improves with dim
};

SpectraComparison compare_spectra(const PolynomialFamily& fam, int dim,
                                  int top_k);

}  // namespace qosc
