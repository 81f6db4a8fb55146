#pragma once

// Coherent states of the deformed oscillators: lowering-operator
// eigenvectors built from the structure factorial, their normalization,
// overlaps, and the generating-function identities of the polynomial
// families.

#include <complex>
#include <vector>

#include "qosc/polynomials.hpp"

namespace qosc {

// Product f_0 ... f_{n-1} of the structure sequence (empty product at
// n = 0).  log_ variant for the scales where the product under/overflows.
double structure_factorial(const DeformationParams& p, int n);
double log_structure_factorial(const DeformationParams& p, int n);

// Truncated lowering-operator eigenvector.  coefficients holds the
// normalized vector; the unnormalized expansion is z^n / f_{n-1}! whose
// 2-norm is norm_factor (+inf once it exceeds double range; the log is
// always finite and kept separately).  tail_bound bounds the normalized
// mass beyond N_trunc when the edge ratio |z|/f allows a geometric
// domination; otherwise it is +inf and tail_certified is false.  Families
// whose ladder decays (f_n -> 0) give the defining series zero radius of
// convergence, so their states exist only as truncated vectors: they are
// still constructed (the eigen-relation holds exactly on the interior
// components), unless require_certified demands a finite tail bound, in
// which case TruncationError is thrown.
struct CoherentState {
  cplx z{0.0, 0.0};
  DeformationParams params{};
  std::vector<cplx> coefficients;
  double norm_factor = 1.0;
  double log_norm_factor = 0.0;
  int N_trunc = 0;
  double tail_bound = 0.0;
  bool tail_certified = true;
};

CoherentState coherent_state(const DeformationParams& p, cplx z, int N_trunc,
                             bool require_certified = false);

// ||(a - z) psi|| over components 0..N_trunc-2 (the truncation-edge row is
// excluded), for the normalized state psi.
double eigen_residual(const CoherentState& s, const DeformationParams& p);

// <a|b> = sum conj(a_n) b_n over the common range; conjugate-linear in the
// first slot.  Throws DomainError when the two states carry different
// deformation parameters.
cplx overlap(const CoherentState& a, const CoherentState& b);

// Squared normalization N^2(zsq) = sum zsq^n / (f_{n-1}!)^2, summed from
// the defining series.  The convergence radius (sup of f_n^2) is probed
// first; ConvergenceError outside it.
double normalization_factor(const DeformationParams& p, double zsq);

// Radius regime of the defining series in |z|: zero (the ladder decays, so
// every z != 0 lies outside), finite (the ladder plateaus; *radius_sq
// receives the squared radius sup f_n^2), or infinite (the ladder grows).
enum class SeriesRadius { zero, finite, infinite };
SeriesRadius coherent_series_radius(const DeformationParams& p,
                                    double* radius_sq = nullptr);

struct GeneratingFunctionCheck {
  cplx series_side{1.0, 0.0};
  cplx closed_side{1.0, 0.0};
  double gap = 0.0;
  bool identity_mismatch = false;  // gap above 1e-6 with both sides finite
  int terms_used = 0;
};

// Checks the family's printed generating-function identity at (x, t):
//   discrete_II   : sum (-1)^n q^{n(n-1)}/(q;q)_n h_n(x) t^n
//                   = (-it; q)_inf 1phi1(ix; -it; q; it)
//   generalized_II: the same identity transported through the parameter
//                   restriction (series in q^{-alpha n^2}/(q';q')_n, closed
//                   side at rescaled argument and lattice base q')
//   discrete_I / generalized_I: the printed series has zero radius in t
//                   (coefficients grow like q^{-n(n-1)/2}); summation is
//                   attempted and ConvergenceError raised when the terms
//                   grow without bound, which happens for every t != 0
// Generalized families must sit on their ValidityRestriction.
GeneratingFunctionCheck generating_function_check(const PolynomialFamily& fam,
                                                  double x, cplx t,
                                                  int n_max = 400);

}  // namespace qosc
