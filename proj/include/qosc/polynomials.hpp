#pragma once

// Five orthogonal polynomial families: classical Hermite, the two discrete
// q-Hermite families, and their two-parameter generalizations.  Each family
// evaluates through three routes (recurrence, explicit sum, terminating
// basic hypergeometric series); the recurrence is the defining route, the
// other two are representations under test.  Also: monomial coefficients,
// orthonormal transition coefficients, q <-> 1/q duality transforms, and the
// q -> 1 classical limit check.

#include <complex>
#include <vector>

#include "qosc/oscillator.hpp"
#include "qosc/qseries.hpp"

namespace qosc {

enum class FamilyKind {
  classical,
  discrete_I,
  discrete_II,
  generalized_I,
  generalized_II,
};

// Family descriptor.  The discrete families are fixed parameter points of
// the generalized ones, so params carries the matching ladder parameters in
// every case; lattice_c scales the bilateral lattice used by the II-type
// measures and is ignored elsewhere.
struct PolynomialFamily {
  FamilyKind kind = FamilyKind::classical;
  DeformationParams params{};
  double lattice_c = 1.0;
};

PolynomialFamily classical_family();
PolynomialFamily discrete_family_I(double q);
PolynomialFamily discrete_family_II(double q, double c = 1.0);
PolynomialFamily generalized_family_I(const DeformationParams& p);
PolynomialFamily generalized_family_II(const DeformationParams& p, double c = 1.0);

enum class RestrictionKind { none, alpha_eq_half_lminus1, alpha_eq_minus_lminus1 };

// Which parameter restriction certifies the family's closed forms, and
// whether the descriptor satisfies it.
struct ValidityRestriction {
  FamilyKind family = FamilyKind::classical;
  RestrictionKind restriction = RestrictionKind::none;
  bool satisfied = true;
};

ValidityRestriction validity_restriction(const PolynomialFamily& fam);

// Defining route: forward three-term recurrence from h_{-1}=0, h_0=1
// (classical: H_1 = 2x).
cplx eval_recurrence(const PolynomialFamily& fam, int n, cplx x);

// Finite sum over k = 0..floor(n/2).  For the generalized families this
// closed form solves the recurrence only on the family's restriction; off
// restriction it is still evaluated as printed (the mismatch is a tested,
// documented property).
cplx eval_explicit(const PolynomialFamily& fam, int n, cplx x);

// x^n times a terminating basic hypergeometric series in 1/x^2.
// Throws DomainError at x = 0.
cplx eval_hypergeometric(const PolynomialFamily& fam, int n, cplx x);

// Monomial coefficients from the recurrence run on coefficient arrays.
// coeffs[i] multiplies x^i; entries with parity opposite to n are exact 0.
struct PolyCoefficients {
  int degree = 0;
  std::vector<double> coeffs;
};

PolyCoefficients coefficients(const PolynomialFamily& fam, int n);

// Orthonormal transition coefficients P_n(x): prefactor times the family
// polynomial at the rescaled argument.  They satisfy the symmetric ladder
// x P_n = f_n P_{n+1} + f_{n-1} P_{n-1} with the family's structure
// sequence.  q-families only, and the prefactor needs qprime < 1.
double transition_coefficients(const PolynomialFamily& fam, int n, double x);

// The argument rescaling s (polynomial argument = s * x) and the n-th
// prefactor, exposed for consistency tests and the measure sums.
double transition_argument_scale(const PolynomialFamily& fam);
double transition_prefactor(const PolynomialFamily& fam, int n);

struct DualityPair {
  cplx lhs;
  cplx rhs;
};

// I-type polynomial at (ix, base 1/q) against i^n times the II-type at
// (x, base q).  Base-1/q values come from term-by-term explicit sums.
DualityPair duality_transform_discrete(int n, double x, double q);

// Generalized analogue: lhs is the I-type explicit sum at (ix, base 1/q);
// rhs is i^n times the printed image series at (x, base q).  The printed
// display reads as the expansion of h_n(ix; 1/q); see README for the
// calibrated reading.
DualityPair duality_transform_generalized(const DeformationParams& p, int n,
                                          double x);

struct ClassicalLimitReport {
  double max_ladder_rel_dev = 0.0;  // discrete-I ladder vs sqrt(n+1)
  double max_poly_rel_dev = 0.0;    // rescaled discrete-I vs monic Hermite
};

// Compares the discrete-I structure ladder at q near 1 with the classical
// oscillator ladder, and the rescaled polynomials with monic Hermite
// H_n(x)/2^n on x_grid.  The polynomial gap closes like (1-q) n^2 and is
// reported, not asserted, at loose tolerance.
ClassicalLimitReport classical_limit_check(double q_near_1, int n_max,
                                           const std::vector<double>& x_grid);

}  // namespace qosc
