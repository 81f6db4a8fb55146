#pragma once

// Deformed ladder algebras: parameter points, structure sequences, truncated
// Fock-space operators, defining-relation checks, Hamiltonian spectra, and
// the essential-self-adjointness classifier for the position operator.

#include <optional>
#include <string>
#include <vector>

#include "qosc/errors.hpp"

namespace qosc {

// Parameter point (alpha, beta, l, q) of the deformation family.  The
// auxiliary base qprime = q^(l-1) controls the bracket growth; l = 1 is the
// analytic limit where the bracket degenerates to n+1.
struct DeformationParams {
  double alpha = 0.0;
  double beta = 0.0;
  double l = 1.0;
  double q = 0.5;

  double qprime() const;
  bool analytic_limit() const { return l == 1.0; }
};

// Validates q > 0, q != 1 and returns the point.  Throws DomainError.
DeformationParams make_params(double alpha, double beta, double l, double q);

enum class Preset {
  classical,
  biedenharn_macfarlane_a,
  biedenharn_macfarlane_b,
  symmetric,
  hermite_I,
  hermite_II,
};

// Named parameter points.  The symmetric family needs its own l, so it goes
// through the three-argument overload; passing it to the two-argument one
// throws UnknownPreset, as does an unrecognized name string.
DeformationParams preset(Preset which, double q);
DeformationParams preset(Preset which, double q, double l);
Preset parse_preset(const std::string& name);
std::string preset_name(Preset which);

// f_n = q^{alpha(n+1)+beta/2} * ((1-qprime^{n+1})/(1-qprime))^{1/2}.
// n = -1 returns 0 (the ladder floor).  Strictly positive for n >= 0.
double structure_function(const DeformationParams& p, long long n);

// log f_n, stable for n far beyond floating-point range of f_n itself.
double log_structure_function(const DeformationParams& p, long long n);

struct StructureSequence {
  DeformationParams params;
  double eval(long long n) const { return structure_function(params, n); }
  double operator()(long long n) const { return eval(n); }
};

enum class OperatorFlavor { position, momentum, hamiltonian, raising, lowering, number };

// Truncated operator on span{|0>, ..., |dim-1>}.  position/momentum store the
// symmetric tridiagonal skeleton (momentum differs only by the i/-i phase
// pattern, which a diagonal unitary removes; its real spectrum matches).
// raising stores f_n as the subdiagonal, lowering as the superdiagonal.
struct JacobiOperator {
  int dim = 0;
  std::vector<double> diag;
  std::vector<double> offdiag;
  OperatorFlavor flavor = OperatorFlavor::position;
};

JacobiOperator build_operator(const DeformationParams& p, OperatorFlavor flavor,
                              int dim);

// Deviations of the two quadratic defining relations and the two number-
// operator commutators, measured on the truncation interior (basis columns
// 0..dim-2 for the quadratic relations).  Deviations are normalized by the
// largest term magnitude in the same column, so families whose matrix
// entries grow geometrically are judged at uniform relative accuracy.
struct RelationReport {
  double rel_quadratic_1 = 0.0;  // a a+ - q^{2 alpha} a+ a = q^{2 alpha(N+1)+beta} qprime^N
  double rel_quadratic_2 = 0.0;  // a a+ - q^{2 alpha} qprime a+ a = q^{2 alpha(N+1)+beta}
  double rel_number_lowering = 0.0;  // [N, a] = -a
  double rel_number_raising = 0.0;   // [N, a+] = a+
  double max_abs_deviation = 0.0;    // unnormalized, for reference
  double tol = 0.0;
  bool pass = false;
};

RelationReport verify_defining_relations(const DeformationParams& p, int dim,
                                         double tol);

// lambda_n = f_{n-1}^2 + f_n^2 for n = 0..n_max, via the closed form.
std::vector<double> hamiltonian_spectrum(const DeformationParams& p, int n_max);

struct SelfAdjointnessVerdict {
  bool series_convergent = false;  // sum 1/f_n < infinity
  std::pair<int, int> deficiency_indices{0, 0};
  bool carleman_condition_holds = false;
  bool log_concavity_holds = false;
  // Printed-case-table cross-check; empty on a table boundary, where only
  // the direct ratio test applies.
  std::optional<bool> table_convergent;
  bool on_table_boundary = false;
};

SelfAdjointnessVerdict classify_self_adjointness(const DeformationParams& p);

// Eigenvalues of the truncated position matrix, sorted descending.
std::vector<double> truncated_position_spectrum(const DeformationParams& p,
                                                int dim);

// Number of eigenvalues of the truncated position matrix strictly below mu,
// by tridiagonal LDL^T inertia.  Robust for spectra spanning hundreds of
// orders of magnitude, where dense solvers lose the small eigenvalues.
int eigenvalue_count_below(const DeformationParams& p, int dim, double mu);

}  // namespace qosc
