#include "qosc/oscillator.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace qosc {

double DeformationParams::qprime() const { return std::pow(q, l - 1.0); }

DeformationParams make_params(double alpha, double beta, double l, double q) {
  if (!(q > 0.0) || q == 1.0)
    throw DomainError("deformation base q must be positive and != 1");
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(l))
    throw DomainError("deformation parameters must be finite");
  return DeformationParams{alpha, beta, l, q};
}

DeformationParams preset(Preset which, double q) {
  switch (which) {
    case Preset::classical: return make_params(0.0, 0.0, 1.0, q);
    case Preset::biedenharn_macfarlane_a: return make_params(0.5, -1.0, -1.0, q);
    case Preset::biedenharn_macfarlane_b: return make_params(-0.5, 1.0, 3.0, q);
    case Preset::hermite_I: return make_params(0.5, -1.0, 2.0, q);
    case Preset::hermite_II: return make_params(-1.0, 2.0, 2.0, q);
    case Preset::symmetric:
      throw UnknownPreset("symmetric preset needs an explicit l");
  }
  throw UnknownPreset("unrecognized preset");
}

DeformationParams preset(Preset which, double q, double l) {
  if (which != Preset::symmetric)
    throw UnknownPreset("only the symmetric preset takes an l argument");
  return make_params(0.5, -1.0, l, q);
}

Preset parse_preset(const std::string& name) {
  if (name == "classical") return Preset::classical;
  if (name == "BM-a" || name == "biedenharn_macfarlane_a")
    return Preset::biedenharn_macfarlane_a;
  if (name == "BM-b" || name == "biedenharn_macfarlane_b")
    return Preset::biedenharn_macfarlane_b;
  if (name == "symmetric") return Preset::symmetric;
  if (name == "hermite_I") return Preset::hermite_I;
  if (name == "hermite_II") return Preset::hermite_II;
  throw UnknownPreset("unrecognized preset name: " + name);
}

std::string preset_name(Preset which) {
  switch (which) {
    case Preset::classical: return "classical";
    case Preset::biedenharn_macfarlane_a: return "BM-a";
    case Preset::biedenharn_macfarlane_b: return "BM-b";
    case Preset::symmetric: return "symmetric";
    case Preset::hermite_I: return "hermite_I";
    case Preset::hermite_II: return "hermite_II";
  }
  return "?";
}

namespace {

// log of (1 - qprime^{n+1})/(1 - qprime) given lnqp = log(qprime).
// Stable on both sides of qprime = 1 and for exponents far outside the
// range of the direct power.
double log_bracket(double lnqp, long long np1) {
  if (lnqp == 0.0) return std::log(static_cast<double>(np1));
  double a = static_cast<double>(np1) * lnqp;
  if (lnqp < 0.0) {
    // both expm1 values are in (-1, 0); the ratio is positive
    return std::log(std::expm1(a) / std::expm1(lnqp));
  }
  if (a < 700.0) return std::log(std::expm1(a) / std::expm1(lnqp));
  // (qprime^{n+1}-1)/(qprime-1) with the leading power factored out
  return a + std::log1p(-std::exp(-a)) - lnqp - std::log1p(-std::exp(-lnqp));
}

}  // namespace

double log_structure_function(const DeformationParams& p, long long n) {
  if (n < 0) throw DomainError("log_structure_function: index below 0");
  const double lnq = std::log(p.q);
  const double lnqp = p.analytic_limit() ? 0.0 : (p.l - 1.0) * lnq;
  return (p.alpha * static_cast<double>(n + 1) + 0.5 * p.beta) * lnq +
         0.5 * log_bracket(lnqp, n + 1);
}

double structure_function(const DeformationParams& p, long long n) {
  if (n == -1) return 0.0;
  if (n < -1) throw DomainError("structure_function: index below -1");
  const double lnq = std::log(p.q);
  const double lnqp = p.analytic_limit() ? 0.0 : (p.l - 1.0) * lnq;
  double bracket;
  if (lnqp == 0.0) {
    bracket = static_cast<double>(n + 1);
  } else {
    double a = static_cast<double>(n + 1) * lnqp;
    if (std::fabs(a) < 700.0 && std::fabs(lnqp) < 700.0)
      bracket = std::expm1(a) / std::expm1(lnqp);
    else
      bracket = std::numeric_limits<double>::infinity();
  }
  double head = std::pow(p.q, p.alpha * static_cast<double>(n + 1) + 0.5 * p.beta);
  double f = head * std::sqrt(bracket);
  if (std::isfinite(f) && f > 0.0) return f;
  return std::exp(log_structure_function(p, n));
}

JacobiOperator build_operator(const DeformationParams& p, OperatorFlavor flavor,
                              int dim) {
  if (dim < 2) throw DomainError("build_operator: dim must be >= 2");
  JacobiOperator op;
  op.dim = dim;
  op.flavor = flavor;
  op.diag.assign(dim, 0.0);
  op.offdiag.assign(dim - 1, 0.0);
  switch (flavor) {
    case OperatorFlavor::position:
    case OperatorFlavor::momentum:
    case OperatorFlavor::raising:
    case OperatorFlavor::lowering:
      for (int n = 0; n + 1 < dim; ++n)
        op.offdiag[n] = structure_function(p, n);
      break;
    case OperatorFlavor::hamiltonian: {
      double prev = 0.0;  // f_{-1}
      for (int n = 0; n < dim; ++n) {
        double fn = structure_function(p, n);
        op.diag[n] = prev * prev + fn * fn;
        prev = fn;
      }
      break;
    }
    case OperatorFlavor::number:
      for (int n = 0; n < dim; ++n) op.diag[n] = static_cast<double>(n);
      break;
  }
  return op;
}

namespace {

using Mat = std::vector<std::vector<double>>;

Mat zeros(int d) { return Mat(d, std::vector<double>(d, 0.0)); }

Mat matmul(const Mat& A, const Mat& B) {
  int d = static_cast<int>(A.size());
  Mat C = zeros(d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      double a = A[i][k];
      if (a == 0.0) continue;
      for (int j = 0; j < d; ++j) C[i][j] += a * B[k][j];
    }
  return C;
}

}  // namespace

RelationReport verify_defining_relations(const DeformationParams& p, int dim,
                                         double tol) {
  if (dim < 3) throw DomainError("verify_defining_relations: dim must be >= 3");
  const double qp = p.analytic_limit() ? 1.0 : p.qprime();
  const double q2a = std::pow(p.q, 2.0 * p.alpha);

  Mat A = zeros(dim), Ad = zeros(dim), N = zeros(dim);
  for (int n = 0; n + 1 < dim; ++n) {
    double fn = structure_function(p, n);
    A[n][n + 1] = fn;   // lowering: a|n+1> = f_n |n>
    Ad[n + 1][n] = fn;  // raising:  a+|n> = f_n |n+1>
  }
  for (int n = 0; n < dim; ++n) N[n][n] = static_cast<double>(n);

  Mat AAd = matmul(A, Ad), AdA = matmul(Ad, A);
  Mat NA = matmul(N, A), AN = matmul(A, N);
  Mat NAd = matmul(N, Ad), AdN = matmul(Ad, N);

  RelationReport rep;
  rep.tol = tol;

  // Quadratic relations close on columns 0..dim-2; the last column lacks the
  // f_{dim-1} rung and is a pure truncation artifact.
  for (int j = 0; j + 1 < dim; ++j) {
    double rhs1 = std::pow(p.q, 2.0 * p.alpha * (j + 1) + p.beta) *
                  std::pow(qp, static_cast<double>(j));
    double rhs2 = std::pow(p.q, 2.0 * p.alpha * (j + 1) + p.beta);
    for (int i = 0; i < dim; ++i) {
      double d1 = AAd[i][j] - q2a * AdA[i][j] - (i == j ? rhs1 : 0.0);
      double d2 = AAd[i][j] - q2a * qp * AdA[i][j] - (i == j ? rhs2 : 0.0);
      double scale1 = std::max({std::fabs(AAd[i][j]), std::fabs(q2a * AdA[i][j]),
                                (i == j ? std::fabs(rhs1) : 0.0), 1.0});
      double scale2 = std::max({std::fabs(AAd[i][j]),
                                std::fabs(q2a * qp * AdA[i][j]),
                                (i == j ? std::fabs(rhs2) : 0.0), 1.0});
      rep.rel_quadratic_1 = std::max(rep.rel_quadratic_1, std::fabs(d1) / scale1);
      rep.rel_quadratic_2 = std::max(rep.rel_quadratic_2, std::fabs(d2) / scale2);
      rep.max_abs_deviation =
          std::max({rep.max_abs_deviation, std::fabs(d1), std::fabs(d2)});
    }
  }
  // Number-operator commutators involve no missing rungs; all columns count.
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) {
      double c1 = NA[i][j] - AN[i][j] + A[i][j];   // [N,a] + a = 0
      double c2 = NAd[i][j] - AdN[i][j] - Ad[i][j];  // [N,a+] - a+ = 0
      double s1 = std::max(std::fabs(A[i][j]), 1.0);
      double s2 = std::max(std::fabs(Ad[i][j]), 1.0);
      rep.rel_number_lowering =
          std::max(rep.rel_number_lowering, std::fabs(c1) / s1);
      rep.rel_number_raising =
          std::max(rep.rel_number_raising, std::fabs(c2) / s2);
      rep.max_abs_deviation =
          std::max({rep.max_abs_deviation, std::fabs(c1), std::fabs(c2)});
    }
  }
  rep.pass = rep.rel_quadratic_1 <= tol && rep.rel_quadratic_2 <= tol &&
             rep.rel_number_lowering <= tol && rep.rel_number_raising <= tol;
  return rep;
}

std::vector<double> hamiltonian_spectrum(const DeformationParams& p, int n_max) {
  if (n_max < 0) throw DomainError("hamiltonian_spectrum: negative n_max");
  std::vector<double> lam(n_max + 1);
  const double lnq = std::log(p.q);
  const double lnqp = p.analytic_limit() ? 0.0 : (p.l - 1.0) * lnq;
  for (int n = 0; n <= n_max; ++n) {
    double lower = 0.0;
    if (n > 0)
      lower = std::pow(p.q, 2.0 * p.alpha * n + p.beta) *
              (lnqp == 0.0 ? static_cast<double>(n)
                           : std::expm1(n * lnqp) / std::expm1(lnqp));
    double upper = std::pow(p.q, 2.0 * p.alpha * (n + 1) + p.beta) *
                   (lnqp == 0.0 ? static_cast<double>(n + 1)
                                : std::expm1((n + 1) * lnqp) / std::expm1(lnqp));
    lam[n] = lower + upper;
  }
  return lam;
}

SelfAdjointnessVerdict classify_self_adjointness(const DeformationParams& p) {
  SelfAdjointnessVerdict v;

  // Direct ratio analysis: log f_{n+1} - log f_n tends to
  // alpha*log q + max(log qprime, 0)/2.  The sum of 1/f_n converges exactly
  // when this limit is positive (geometric growth); zero limit means bounded
  // or ~sqrt(n) growth, whose reciprocal sum diverges.
  const double lnq = std::log(p.q);
  const double lnqp = p.analytic_limit() ? 0.0 : (p.l - 1.0) * lnq;
  const double dlog = p.alpha * lnq + 0.5 * std::max(lnqp, 0.0);
  v.series_convergent = dlog > 0.0;

  v.deficiency_indices = v.series_convergent ? std::make_pair(1, 1)
                                             : std::make_pair(0, 0);
  v.carleman_condition_holds = !v.series_convergent;

  // Printed case tables, exposed for cross-checking.  Rows are strict
  // inequalities; on any boundary the table is silent.
  const double lm1 = p.l - 1.0;
  v.on_table_boundary =
      (lm1 == 0.0) || (lm1 > 0.0 ? p.alpha == 0.0 : p.alpha + lm1 == 0.0);
  if (!v.on_table_boundary) {
    if (p.q < 1.0) {
      if (lm1 > 0.0)
        v.table_convergent = (p.alpha < 0.0);
      else
        v.table_convergent = (p.alpha + lm1 < 0.0);
    } else {
      if (lm1 > 0.0)
        v.table_convergent = (p.alpha > 0.0);
      else
        v.table_convergent = (p.alpha + lm1 > 0.0);
    }
  }

  // f_{n-1} f_{n+1} <= f_n^2 in log form, small slack for rounding.
  v.log_concavity_holds = true;
  for (int n = 1; n <= 100; ++n) {
    double lhs = log_structure_function(p, n - 1) +
                 log_structure_function(p, n + 1);
    double rhs = 2.0 * log_structure_function(p, n);
    if (lhs > rhs + 1e-10) {
      v.log_concavity_holds = false;
      break;
    }
  }
  return v;
}

std::vector<double> truncated_position_spectrum(const DeformationParams& p,
                                                int dim) {
  if (dim < 2) throw DomainError("truncated_position_spectrum: dim must be >= 2");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd sub(dim - 1);
  for (int n = 0; n + 1 < dim; ++n) sub[n] = structure_function(p, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  std::vector<double> ev(solver.eigenvalues().data(),
                         solver.eigenvalues().data() + dim);
  std::sort(ev.begin(), ev.end(), std::greater<double>());
  return ev;
}

int eigenvalue_count_below(const DeformationParams& p, int dim, double mu) {
  if (dim < 1) throw DomainError("eigenvalue_count_below: dim must be >= 1");
  // LDL^T sweep of (J - mu I): the number of negative pivots equals the
  // number of eigenvalues below mu (Sylvester inertia).  Pivots are kept
  // away from exact zero so the sweep cannot divide by 0.
  int count = 0;
  double d = -mu;
  if (d == 0.0) d = -1e-300;
  if (d < 0.0) ++count;
  double fprev = structure_function(p, 0);
  for (int k = 1; k < dim; ++k) {
    d = -mu - fprev * fprev / d;
    if (d == 0.0) d = -1e-300;
    if (d < 0.0) ++count;
    if (k + 1 < dim) fprev = structure_function(p, k);
  }
  return count;
}

}  // namespace qosc
