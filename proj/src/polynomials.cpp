#include "qosc/polynomials.hpp"

#include <cmath>

namespace qosc {

namespace {

void require_q_in_unit(double q, const char* who) {
  if (!(q > 0.0 && q < 1.0))
    throw DomainError(std::string(who) + ": requires 0 < q < 1");
}

}  // namespace

PolynomialFamily classical_family() {
  return PolynomialFamily{FamilyKind::classical, make_params(0, 0, 1, 0.5), 1.0};
}

PolynomialFamily discrete_family_I(double q) {
  require_q_in_unit(q, "discrete_family_I");
  return PolynomialFamily{FamilyKind::discrete_I, preset(Preset::hermite_I, q), 1.0};
}

PolynomialFamily discrete_family_II(double q, double c) {
  require_q_in_unit(q, "discrete_family_II");
  if (!(c > 0.0)) throw DomainError("discrete_family_II: lattice scale c must be > 0");
  return PolynomialFamily{FamilyKind::discrete_II, preset(Preset::hermite_II, q), c};
}

PolynomialFamily generalized_family_I(const DeformationParams& p) {
  require_q_in_unit(p.q, "generalized_family_I");
  if (p.l == 1.0) throw DomainError("generalized_family_I: l must differ from 1");
  return PolynomialFamily{FamilyKind::generalized_I, p, 1.0};
}

PolynomialFamily generalized_family_II(const DeformationParams& p, double c) {
  require_q_in_unit(p.q, "generalized_family_II");
  if (p.l == 1.0) throw DomainError("generalized_family_II: l must differ from 1");
  if (!(c > 0.0)) throw DomainError("generalized_family_II: lattice scale c must be > 0");
  return PolynomialFamily{FamilyKind::generalized_II, p, c};
}

ValidityRestriction validity_restriction(const PolynomialFamily& fam) {
  ValidityRestriction r;
  r.family = fam.kind;
  const double a = fam.params.alpha, lm1 = fam.params.l - 1.0;
  switch (fam.kind) {
    case FamilyKind::generalized_I:
      r.restriction = RestrictionKind::alpha_eq_half_lminus1;
      r.satisfied = std::fabs(a - 0.5 * lm1) <= 1e-12;
      break;
    case FamilyKind::generalized_II:
      r.restriction = RestrictionKind::alpha_eq_minus_lminus1;
      r.satisfied = std::fabs(a + lm1) <= 1e-12;
      break;
    default:
      r.restriction = RestrictionKind::none;
      r.satisfied = true;
      break;
  }
  return r;
}

namespace {

// Coefficient on h_{n-1} in x h_n = h_{n+1} + c_n h_{n-1} (q-families).
double back_coefficient(const PolynomialFamily& fam, int n) {
  const auto& p = fam.params;
  switch (fam.kind) {
    case FamilyKind::discrete_I:
      return std::pow(p.q, n - 1.0) * (1.0 - std::pow(p.q, n));
    case FamilyKind::discrete_II:
      return std::pow(p.q, -2.0 * n + 1.0) * (1.0 - std::pow(p.q, n));
    case FamilyKind::generalized_I:
      return std::pow(p.q, 2.0 * p.alpha * n + p.beta) *
             (1.0 - std::pow(p.qprime(), n));
    case FamilyKind::generalized_II:
      return std::pow(p.q, 2.0 * p.alpha * n + 0.5 * p.beta) *
             (1.0 - std::pow(p.qprime(), n));
    case FamilyKind::classical:
      break;
  }
  throw DomainError("back_coefficient: classical family handled separately");
}

}  // namespace

cplx eval_recurrence(const PolynomialFamily& fam, int n, cplx x) {
  if (n < 0) throw DomainError("eval_recurrence: negative degree");
  if (fam.kind == FamilyKind::classical) {
    cplx hm{0.0, 0.0}, h{1.0, 0.0};
    for (int m = 0; m < n; ++m) {
      cplx hp = 2.0 * x * h - 2.0 * static_cast<double>(m) * hm;
      hm = h;
      h = hp;
    }
    return h;
  }
  cplx hm{0.0, 0.0}, h{1.0, 0.0};
  for (int m = 0; m < n; ++m) {
    cplx hp = x * h - back_coefficient(fam, m) * hm;
    hm = h;
    h = hp;
  }
  return h;
}

cplx eval_explicit(const PolynomialFamily& fam, int n, cplx x) {
  if (n < 0) throw DomainError("eval_explicit: negative degree");
  if (fam.kind == FamilyKind::classical) {
    // sum_k (-1)^k n!/(k! (n-2k)!) (2x)^{n-2k}; extended precision keeps the
    // integer coefficients exact up to n ~ 30 despite their ~1e19 size
    std::complex<long double> sum{0.0L, 0.0L};
    const std::complex<long double> tx{2.0L * static_cast<long double>(x.real()),
                                       2.0L * static_cast<long double>(x.imag())};
    for (int k = 0; 2 * k <= n; ++k) {
      long double coef = 1.0L;
      for (int j = n - 2 * k + 1; j <= n; ++j) coef *= j;  // n!/(n-2k)!
      for (int j = 2; j <= k; ++j) coef /= j;              // / k!
      std::complex<long double> xp{1.0L, 0.0L};
      for (int j = 0; j < n - 2 * k; ++j) xp *= tx;
      sum += ((k % 2) ? -coef : coef) * xp;
    }
    return cplx{static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
  }

  const auto& p = fam.params;
  const bool type_I = (fam.kind == FamilyKind::discrete_I ||
                       fam.kind == FamilyKind::generalized_I);
  const double b = p.qprime();  // equals q for the discrete presets

  // (b;b)_m for m <= n, shared by every term's coefficient ratio
  std::vector<double> poch(n + 1), poch2(n / 2 + 1);
  poch[0] = 1.0;
  for (int m = 1; m <= n; ++m)
    poch[m] = poch[m - 1] * (1.0 - std::pow(b, m));
  poch2[0] = 1.0;
  for (int m = 1; m <= n / 2; ++m)
    poch2[m] = poch2[m - 1] * (1.0 - std::pow(b, 2 * m));

  cplx sum{0.0, 0.0};
  for (int k = 0; 2 * k <= n; ++k) {
    // the two q-power factors are merged into one exponent so that huge
    // intermediate magnitudes cancel before exponentiation
    double E;
    if (type_I)
      E = (2.0 * p.alpha * n + p.beta) * k + (p.l - 1.0) * k * (k - n);
    else
      E = (2.0 * p.alpha * n + 0.5 * p.beta) * k + (p.l - 1.0) * 2.0 * k * k;
    double coef = poch[n] / (poch2[k] * poch[n - 2 * k]) * std::pow(p.q, E);
    cplx xp = (n - 2 * k == 0) ? cplx{1.0, 0.0}
                               : std::pow(x, cplx(static_cast<double>(n - 2 * k), 0.0));
    sum += ((k % 2) ? -coef : coef) * xp;
  }
  return sum;
}

cplx eval_hypergeometric(const PolynomialFamily& fam, int n, cplx x) {
  if (n < 0) throw DomainError("eval_hypergeometric: negative degree");
  if (x == cplx{0.0, 0.0})
    throw DomainError("eval_hypergeometric: x = 0 divides the argument");
  if (n == 0) return cplx{1.0, 0.0};

  cplx xn = std::pow(x, cplx(static_cast<double>(n), 0.0));

  if (fam.kind == FamilyKind::classical) {
    // (2x)^n 2F0(-n/2, -(n-1)/2; ; -1/x^2), terminating rising-factorial sum
    cplx sum{0.0, 0.0};
    double a1 = -0.5 * n, a2 = -0.5 * (n - 1);
    cplx term{1.0, 0.0};
    cplx zz = -1.0 / (x * x);
    for (int k = 0;; ++k) {
      sum += term;
      if (2 * (k + 1) > n) break;
      term *= (a1 + k) * (a2 + k) / (k + 1.0) * zz;
    }
    return std::pow(2.0 * x, cplx(static_cast<double>(n), 0.0)) * sum;
  }

  const auto& p = fam.params;
  const double b = p.qprime();
  const double Q = b * b;  // series base
  std::vector<cplx> upper{cplx{std::pow(b, -n), 0.0},
                          cplx{std::pow(b, -n + 1.0), 0.0}};
  SeriesValue s;
  if (fam.kind == FamilyKind::discrete_I || fam.kind == FamilyKind::generalized_I) {
    cplx z = std::pow(p.q, 2.0 * p.alpha * n + p.beta) *
             std::pow(b, static_cast<double>(n)) / (x * x);
    s = basic_hypergeometric(PhiKind::phi20, upper, {}, Q, z);
  } else {
    cplx z = -std::pow(p.q, 2.0 * p.alpha * n + 0.5 * p.beta) *
             std::pow(b, 2.0 * n + 1.0) / (x * x);
    s = basic_hypergeometric(PhiKind::phi21, upper, {cplx{0.0, 0.0}}, Q, z);
  }
  return xn * s.value;
}

PolyCoefficients coefficients(const PolynomialFamily& fam, int n) {
  if (n < 0) throw DomainError("coefficients: negative degree");
  PolyCoefficients out;
  out.degree = n;
  std::vector<double> hm{}, h{1.0};
  if (fam.kind == FamilyKind::classical) {
    for (int m = 0; m < n; ++m) {
      std::vector<double> hp(m + 2, 0.0);
      for (size_t i = 0; i < h.size(); ++i) hp[i + 1] += 2.0 * h[i];
      for (size_t i = 0; i < hm.size(); ++i) hp[i] -= 2.0 * m * hm[i];
      hm = h;
      h = hp;
    }
  } else {
    for (int m = 0; m < n; ++m) {
      double c = back_coefficient(fam, m);
      std::vector<double> hp(m + 2, 0.0);
      for (size_t i = 0; i < h.size(); ++i) hp[i + 1] += h[i];
      for (size_t i = 0; i < hm.size(); ++i) hp[i] -= c * hm[i];
      hm = h;
      h = hp;
    }
  }
  out.coeffs = h;
  return out;
}

double transition_argument_scale(const PolynomialFamily& fam) {
  const auto& p = fam.params;
  switch (fam.kind) {
    case FamilyKind::discrete_I:
      return std::sqrt(1.0 - p.q);
    case FamilyKind::discrete_II:
      return std::sqrt((1.0 - p.q) / p.q);
    case FamilyKind::generalized_I:
      return std::sqrt(1.0 - p.qprime());
    case FamilyKind::generalized_II:
      return std::pow(p.q, -0.25 * p.beta) * std::sqrt(1.0 - p.qprime());
    case FamilyKind::classical:
      break;
  }
  throw DomainError("transition_argument_scale: q-families only");
}

double transition_prefactor(const PolynomialFamily& fam, int n) {
  const auto& p = fam.params;
  const double b = p.qprime();
  if (fam.kind == FamilyKind::classical)
    throw DomainError("transition_prefactor: q-families only");
  if (!(b > 0.0 && b < 1.0))
    throw DomainError("transition_prefactor: closed form needs qprime in (0,1)");
  double pochn = q_pochhammer(b, b, n);
  double expo;
  switch (fam.kind) {
    case FamilyKind::discrete_I:
      expo = -n * (n - 1.0) / 4.0;
      break;
    case FamilyKind::discrete_II:
      expo = n * n / 2.0;
      break;
    case FamilyKind::generalized_I:
      expo = -0.5 * p.alpha * n * n - 0.5 * (p.alpha + p.beta) * n;
      break;
    case FamilyKind::generalized_II:
      expo = -0.5 * p.alpha * n * n - 0.25 * (2.0 * p.alpha + p.beta) * n;
      break;
    default:
      expo = 0.0;
  }
  return std::pow(p.q, expo) / std::sqrt(pochn);
}

double transition_coefficients(const PolynomialFamily& fam, int n, double x) {
  double s = transition_argument_scale(fam);
  cplx h = eval_recurrence(fam, n, cplx{s * x, 0.0});
  return transition_prefactor(fam, n) * h.real();
}

namespace {

// Explicit I-type sum with all base powers inverted (base 1/q), evaluated
// term by term; bp is the original qprime.
cplx explicit_I_inverted(const DeformationParams& p, int n, cplx x) {
  const double bp = p.qprime();
  std::vector<double> poch(n + 1), poch2(n / 2 + 1);
  poch[0] = 1.0;
  for (int m = 1; m <= n; ++m)
    poch[m] = poch[m - 1] * (1.0 - std::pow(bp, -m));
  poch2[0] = 1.0;
  for (int m = 1; m <= n / 2; ++m)
    poch2[m] = poch2[m - 1] * (1.0 - std::pow(bp, -2.0 * m));
  cplx sum{0.0, 0.0};
  for (int k = 0; 2 * k <= n; ++k) {
    double E = (2.0 * p.alpha * n + p.beta) * k + (p.l - 1.0) * k * (k - n);
    double coef = poch[n] / (poch2[k] * poch[n - 2 * k]) * std::pow(p.q, -E);
    cplx xp = (n - 2 * k == 0) ? cplx{1.0, 0.0}
                               : std::pow(x, cplx(static_cast<double>(n - 2 * k), 0.0));
    sum += ((k % 2) ? -coef : coef) * xp;
  }
  return sum;
}

}  // namespace

DualityPair duality_transform_discrete(int n, double x, double q) {
  require_q_in_unit(q, "duality_transform_discrete");
  DualityPair d;
  const cplx ix{0.0, x};
  d.lhs = explicit_I_inverted(preset(Preset::hermite_I, q), n, ix);
  cplx in = std::pow(cplx{0.0, 1.0}, cplx(static_cast<double>(n), 0.0));
  d.rhs = in * eval_recurrence(discrete_family_II(q), n, cplx{x, 0.0});
  return d;
}

DualityPair duality_transform_generalized(const DeformationParams& p, int n,
                                          double x) {
  require_q_in_unit(p.q, "duality_transform_generalized");
  DualityPair d;
  const cplx ix{0.0, x};
  d.lhs = explicit_I_inverted(p, n, ix);

  // printed image series: II-type powers with inverted exponent signs
  const double bp = p.qprime();
  std::vector<double> poch(n + 1), poch2(n / 2 + 1);
  poch[0] = 1.0;
  for (int m = 1; m <= n; ++m)
    poch[m] = poch[m - 1] * (1.0 - std::pow(bp, m));
  poch2[0] = 1.0;
  for (int m = 1; m <= n / 2; ++m)
    poch2[m] = poch2[m - 1] * (1.0 - std::pow(bp, 2.0 * m));
  cplx sum{0.0, 0.0};
  for (int k = 0; 2 * k <= n; ++k) {
    double E = -(2.0 * p.alpha * n + p.beta) * k + (p.l - 1.0) * k * (2.0 * k - n);
    double coef = poch[n] / (poch2[k] * poch[n - 2 * k]) * std::pow(p.q, E);
    double xp = (n - 2 * k == 0) ? 1.0 : std::pow(x, n - 2 * k);
    sum += cplx{((k % 2) ? -coef : coef) * xp, 0.0};
  }
  cplx in = std::pow(cplx{0.0, 1.0}, cplx(static_cast<double>(n), 0.0));
  d.rhs = in * sum;
  return d;
}

ClassicalLimitReport classical_limit_check(double q_near_1, int n_max,
                                           const std::vector<double>& x_grid) {
  if (!(q_near_1 > 0.0 && q_near_1 < 1.0))
    throw DomainError("classical_limit_check: q must lie in (0,1)");
  ClassicalLimitReport rep;
  auto h1 = preset(Preset::hermite_I, q_near_1);
  for (int n = 0; n <= n_max; ++n) {
    double f = structure_function(h1, n);
    double ref = std::sqrt(n + 1.0);
    rep.max_ladder_rel_dev =
        std::max(rep.max_ladder_rel_dev, std::fabs(f - ref) / ref);
  }
  // h_n(sqrt(1-q^2) x; q) / (1-q^2)^{n/2} approaches monic Hermite H_n/2^n
  auto d1 = discrete_family_I(q_near_1);
  const double om = 1.0 - q_near_1 * q_near_1;
  for (int n = 0; n <= n_max; ++n) {
    for (double x : x_grid) {
      double lhs = eval_recurrence(d1, n, cplx{std::sqrt(om) * x, 0.0}).real() /
                   std::pow(om, 0.5 * n);
      // monic Hermite by recurrence m_{n+1} = x m_n - (n/2) m_{n-1}
      double mm = 0.0, m = 1.0;
      for (int j = 0; j < n; ++j) {
        double mp = x * m - 0.5 * j * mm;
        mm = m;
        m = mp;
      }
      rep.max_poly_rel_dev =
          std::max(rep.max_poly_rel_dev,
                   std::fabs(lhs - m) / std::max(1.0, std::fabs(m)));
    }
  }
  return rep;
}

}  // namespace qosc
