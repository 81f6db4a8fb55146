#include "qosc/coherent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qosc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool same_params(const DeformationParams& a, const DeformationParams& b) {
  return a.alpha == b.alpha && a.beta == b.beta && a.l == b.l && a.q == b.q;
}

// Limiting growth of log f_n, probed at depth; discriminates the three
// radius regimes (0, finite plateau, infinite) of sup f_n^2.
enum class RadiusKind { zero, finite, infinite };

RadiusKind radius_kind(const DeformationParams& p, double& plateau_log_f) {
  const double lf1 = log_structure_function(p, 1000000);
  const double lf2 = log_structure_function(p, 2000000);
  const double slope = (lf2 - lf1) / 1.0e6;
  plateau_log_f = lf2;
  if (slope > 1e-12) return RadiusKind::infinite;
  if (slope < -1e-12) return RadiusKind::zero;
  return RadiusKind::finite;
}

}  // namespace

double log_structure_factorial(const DeformationParams& p, int n) {
  if (n < 0) throw DomainError("structure_factorial: n must be >= 0");
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += log_structure_function(p, k);
  return s;
}

double structure_factorial(const DeformationParams& p, int n) {
  return std::exp(log_structure_factorial(p, n));
}

CoherentState coherent_state(const DeformationParams& p, cplx z, int N_trunc,
                             bool require_certified) {
  if (N_trunc < 1) throw DomainError("coherent_state: N_trunc must be >= 1");
  CoherentState s;
  s.z = z;
  s.params = p;
  s.N_trunc = N_trunc;
  s.coefficients.assign(N_trunc, cplx{0.0, 0.0});

  if (z == cplx{0.0, 0.0}) {
    s.coefficients[0] = 1.0;
    s.norm_factor = 1.0;
    s.log_norm_factor = 0.0;
    s.tail_bound = 0.0;
    s.tail_certified = true;
    return s;
  }

  // log magnitudes of the unnormalized coefficients z^n / f_{n-1}!
  const double log_abs_z = std::log(std::abs(z));
  const double arg_z = std::arg(z);
  std::vector<double> lc(N_trunc);
  lc[0] = 0.0;
  for (int n = 1; n < N_trunc; ++n)
    lc[n] = lc[n - 1] + log_abs_z - log_structure_function(p, n - 1);

  const double M = *std::max_element(lc.begin(), lc.end());
  long double ssq = 0.0L;
  for (int n = 0; n < N_trunc; ++n) {
    const double mag = std::exp(lc[n] - M);
    s.coefficients[n] = std::polar(mag, n * arg_z);
    ssq += static_cast<long double>(mag) * mag;
  }
  const double nrm = std::sqrt(static_cast<double>(ssq));
  for (auto& c : s.coefficients) c /= nrm;
  s.log_norm_factor = M + std::log(nrm);
  s.norm_factor = std::exp(s.log_norm_factor);  // +inf past double range

  // geometric tail domination: valid when the coefficient ratio stays
  // below the edge ratio, i.e. f does not dip below its edge value later
  double f_inf = structure_function(p, N_trunc - 1);
  for (int probe : {N_trunc, N_trunc + 10, N_trunc + 100, N_trunc + 1000})
    f_inf = std::min(f_inf, structure_function(p, probe));
  const double r = std::abs(z) / f_inf;
  if (r < 1.0) {
    const double edge = std::abs(s.coefficients[N_trunc - 1]);
    s.tail_bound = edge * edge * r * r / (1.0 - r * r);
    s.tail_certified = true;
  } else {
    s.tail_bound = kInf;
    s.tail_certified = false;
    if (require_certified)
      throw TruncationError(
          "coherent_state: tail bound not certifiable (edge ratio |z|/f >= 1; "
          "for a decaying ladder the defining series has zero radius)");
  }
  return s;
}

double eigen_residual(const CoherentState& s, const DeformationParams& p) {
  long double acc = 0.0L;
  for (int n = 0; n + 1 < s.N_trunc; ++n) {
    const cplx d = structure_function(p, n) * s.coefficients[n + 1] -
                   s.z * s.coefficients[n];
    acc += static_cast<long double>(std::norm(d));
  }
  return std::sqrt(static_cast<double>(acc));
}

cplx overlap(const CoherentState& a, const CoherentState& b) {
  if (!same_params(a.params, b.params))
    throw DomainError("overlap: states carry different deformation parameters");
  const int n = std::min(a.N_trunc, b.N_trunc);
  cplx acc{0.0, 0.0};
  for (int k = 0; k < n; ++k)
    acc += std::conj(a.coefficients[k]) * b.coefficients[k];
  return acc;
}

double normalization_factor(const DeformationParams& p, double zsq) {
  if (zsq < 0.0) throw DomainError("normalization_factor: zsq must be >= 0");
  if (zsq == 0.0) return 1.0;

  double plateau_log_f = 0.0;
  switch (radius_kind(p, plateau_log_f)) {
    case RadiusKind::zero:
      throw ConvergenceError(
          "normalization_factor: the ladder decays (f_n -> 0), the defining "
          "series has zero radius; only zsq = 0 converges");
    case RadiusKind::finite: {
      const double radius = std::exp(2.0 * plateau_log_f);
      if (!(zsq < radius * (1.0 - 1e-12)))
        throw ConvergenceError(
            "normalization_factor: zsq at or beyond the series radius sup f^2");
      break;
    }
    case RadiusKind::infinite:
      break;
  }

  long double sum = 1.0L, term = 1.0L;
  for (int n = 0; n < 100000; ++n) {
    const double f = structure_function(p, n);
    term *= zsq / (static_cast<long double>(f) * f);
    sum += term;
    if (n >= 5 && term < 1e-17L * sum)
      return static_cast<double>(sum);
    if (!(term < std::numeric_limits<long double>::max()))
      break;
  }
  throw ConvergenceError("normalization_factor: series failed to converge");
}

SeriesRadius coherent_series_radius(const DeformationParams& p,
                                    double* radius_sq) {
  double plateau_log_f = 0.0;
  switch (radius_kind(p, plateau_log_f)) {
    case RadiusKind::zero:
      if (radius_sq) *radius_sq = 0.0;
      return SeriesRadius::zero;
    case RadiusKind::finite:
      if (radius_sq) *radius_sq = std::exp(2.0 * plateau_log_f);
      return SeriesRadius::finite;
    case RadiusKind::infinite:
      if (radius_sq) *radius_sq = std::numeric_limits<double>::infinity();
      return SeriesRadius::infinite;
  }
  return SeriesRadius::infinite;  // unreachable
}

namespace {

// shared closed side (-i s; b)_inf * 1phi1(i u; -i s; b; i s)
cplx type_II_closed_side(double b, double u, cplx t_scaled) {
  const cplx is = cplx{0.0, 1.0} * t_scaled;
  const cplx pre = q_pochhammer_inf(-is, b).value;
  SeriesValue ph = basic_hypergeometric(PhiKind::phi11, {cplx{0.0, u}}, {-is},
                                        b, is);
  return pre * ph.value;
}

}  // namespace

GeneratingFunctionCheck generating_function_check(const PolynomialFamily& fam,
                                                  double x, cplx t,
                                                  int n_max) {
  if (n_max < 1) throw DomainError("generating_function_check: n_max must be >= 1");
  if (fam.kind == FamilyKind::classical)
    throw DomainError("generating_function_check: q-families only");
  ValidityRestriction r = validity_restriction(fam);
  if (!r.satisfied)
    throw RestrictionError(
        "generating_function_check: generalized families must sit on their "
        "parameter restriction");

  GeneratingFunctionCheck out;
  if (t == cplx{0.0, 0.0}) {
    out.terms_used = 1;
    return out;  // both sides are exactly 1
  }

  const auto& p = fam.params;
  const double b = p.qprime();

  if (fam.kind == FamilyKind::discrete_I ||
      fam.kind == FamilyKind::generalized_I)
    // the printed I-type identity pairs coefficients growing like
    // b^{-n(n-1)/2} with an inverted-base infinite product; both sides
    // diverge for every t != 0, so there is no finite evaluation
    throw ConvergenceError(
        "generating_function_check: the I-type printed identity has zero "
        "radius in t (series coefficients grow like b^{-n(n-1)/2} and the "
        "inverted-base product diverges); only t = 0 evaluates");

  cplx sum{0.0, 0.0};
  double poch = 1.0;  // (b;b)_n
  int n = 0;
  for (; n <= n_max; ++n) {
    double log_coef;
    if (fam.kind == FamilyKind::discrete_II)
      log_coef = n * (n - 1.0) * std::log(p.q);
    else  // generalized_II: printed coefficient q^{-alpha n^2}
      log_coef = -p.alpha * n * n * std::log(p.q);
    const cplx h = eval_recurrence(fam, n, cplx{x, 0.0});
    const cplx term = ((n % 2) ? -1.0 : 1.0) * std::exp(log_coef) / poch * h *
                      std::pow(t, cplx(static_cast<double>(n), 0.0));
    sum += term;
    if (n > 10 && std::abs(term) < 1e-18 * std::abs(sum)) break;
    poch *= 1.0 - std::pow(b, n + 1.0);
  }
  if (n > n_max)
    throw ConvergenceError(
        "generating_function_check: series did not settle within n_max");
  out.terms_used = n + 1;
  out.series_side = sum;

  if (fam.kind == FamilyKind::discrete_II) {
    out.closed_side = type_II_closed_side(p.q, x, t);
  } else {  // generalized_II on restriction: base-b identity at rescaled args
    const cplx t_scaled =
        std::pow(p.q, 0.25 * p.beta) * std::sqrt(b) * t;
    const double u = std::pow(p.q, -0.25 * (2.0 * p.alpha + p.beta)) * x;
    out.closed_side = type_II_closed_side(b, u, t_scaled);
  }
  out.gap = std::abs(out.series_side - out.closed_side);
  out.identity_mismatch = out.gap > 1e-6;
  return out;
}

}  // namespace qosc
