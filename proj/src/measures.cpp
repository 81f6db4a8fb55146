#include "qosc/measures.hpp"

#include <algorithm>
#include <cmath>

namespace qosc {

namespace {

struct LatticeGeometry {
  bool type_I = true;
  double b = 0.5;      // lattice base (qprime of the family parameters)
  double scale = 1.0;  // |atom| = scale * b^k (type II: times lattice_c)
};

// On their restrictions the generalized families collapse, in orthonormal
// normalization, onto the base-b discrete relations; the geometry below is
// the image of the base-b lattice under that collapse.
LatticeGeometry geometry(const PolynomialFamily& fam) {
  const auto& p = fam.params;
  LatticeGeometry g;
  g.b = p.qprime();
  switch (fam.kind) {
    case FamilyKind::discrete_I:
      g.type_I = true;
      g.scale = 1.0 / std::sqrt(1.0 - p.q);
      break;
    case FamilyKind::generalized_I:
      g.type_I = true;
      g.scale = std::pow(p.q, 0.5 * (2.0 * p.alpha + p.beta)) /
                std::sqrt(1.0 - g.b);
      break;
    case FamilyKind::discrete_II:
      g.type_I = false;
      g.scale = std::sqrt(p.q / (1.0 - p.q));
      break;
    case FamilyKind::generalized_II:
      g.type_I = false;
      g.scale = std::pow(p.q, 0.5 * (p.alpha + p.beta)) /
                std::sqrt(1.0 - g.b);
      break;
    case FamilyKind::classical:
      throw DomainError("measures: the classical weight is continuous, not a lattice");
  }
  if (!(g.b > 0.0 && g.b < 1.0))
    throw DomainError("measures: lattice base qprime must lie in (0,1)");
  return g;
}

void require_restriction(const PolynomialFamily& fam) {
  ValidityRestriction r = validity_restriction(fam);
  if (!r.satisfied)
    throw RestrictionError(
        "measures: generalized-family orthogonality holds only on the "
        "parameter restriction (I: alpha = (l-1)/2, II: alpha = -(l-1))");
}

double type_II_log_weight(double b, double c, int k) {
  // b^k / (-c^2 b^{2k}; b^2)_inf, in logs to survive far-negative k
  return k * std::log(b) - log_shifted_product(c * c * std::pow(b, 2 * k), b * b);
}

// Right side constant of the II-type relation in orthonormal normalization:
// 2 (b^2, -c^2 b, -b/c^2; b^2)_inf / (b, -c^2, -b^2/c^2; b^2)_inf.
double type_II_rhs_constant(double b, double c) {
  const double B = b * b, cc = c * c;
  double num = q_pochhammer_inf(cplx{B, 0.0}, B).value.real() *
               q_pochhammer_inf(cplx{-cc * b, 0.0}, B).value.real() *
               q_pochhammer_inf(cplx{-b / cc, 0.0}, B).value.real();
  double den = q_pochhammer_inf(cplx{b, 0.0}, B).value.real() *
               q_pochhammer_inf(cplx{-cc, 0.0}, B).value.real() *
               q_pochhammer_inf(cplx{-B / cc, 0.0}, B).value.real();
  return 2.0 * num / den;
}

// Returns k_lo (most negative retained k) and k_hi for the II-type lattice:
// march out from k = 0 until the weight falls below 1e-18 of the running
// mass (both tails decay: geometrically for k -> +inf, super-geometrically
// for k -> -inf).
void type_II_window(double b, double c, int k_max, int& k_lo, int& k_hi,
                    bool& tail_ok) {
  double mass = std::exp(type_II_log_weight(b, c, 0));
  k_lo = 0;
  k_hi = 0;
  bool lo_cut = false, hi_cut = false;
  for (int k = -1; k >= -k_max; --k) {
    double w = std::exp(type_II_log_weight(b, c, k));
    if (w < 1e-18 * mass) {
      lo_cut = true;
      break;
    }
    mass += w;
    k_lo = k;
  }
  for (int k = 1; k <= k_max; ++k) {
    double w = std::exp(type_II_log_weight(b, c, k));
    if (w < 1e-18 * mass) {
      hi_cut = true;
      break;
    }
    mass += w;
    k_hi = k;
  }
  tail_ok = lo_cut && hi_cut;
}

// Stable evaluation of the base-b I-type polynomials down the lattice:
// T[n][k] = h_n(b^k) obeys the forward shift
//   h_n(b x) = h_n(x) - (1 - b^n) x h_{n-1}(x),
// seeded by h_n(1) = b^{n(n-1)/2}, which avoids the cancellation that makes
// the three-term recurrence lose ~5 digits at small lattice points.
std::vector<std::vector<double>> type_I_lattice_table(double b, int n_max,
                                                      int k_max) {
  std::vector<std::vector<double>> T(n_max + 1,
                                     std::vector<double>(k_max + 1, 0.0));
  for (int k = 0; k <= k_max; ++k) T[0][k] = 1.0;
  for (int n = 1; n <= n_max; ++n)
    T[n][0] = std::pow(b, 0.5 * n * (n - 1.0));
  for (int n = 1; n <= n_max; ++n) {
    const double one_minus_bn = -std::expm1(n * std::log(b));
    double bk = 1.0;
    for (int k = 0; k < k_max; ++k) {
      T[n][k + 1] = T[n][k] - one_minus_bn * bk * T[n - 1][k];
      bk *= b;
    }
  }
  return T;
}

// Orthonormal value at the k-th positive lattice atom.  Both family types
// reduce to the base-b discrete prefactor b^{-n(n-1)/4} (I) or b^{n^2/2}
// (II) over sqrt((b;b)_n); see geometry().
double type_I_atom_value(double b, const std::vector<std::vector<double>>& T,
                         int n, int k) {
  return std::pow(b, -0.25 * n * (n - 1.0)) / std::sqrt(q_pochhammer(b, b, n)) *
         T[n][k];
}

long double type_II_atom_value_l(double b, double c, int n, int k) {
  // plain recurrence in extended precision at x = c b^k (well conditioned
  // for the II-type coefficients, which never cancel at these points);
  // returned in extended precision because |h_n| ~ b^{kn} can dwarf the
  // weight it will be multiplied with
  const long double bl = static_cast<long double>(b);
  const long double x = static_cast<long double>(c) * std::pow(bl, k);
  long double hm = 0.0L, h = 1.0L;
  for (int m = 0; m < n; ++m) {
    long double coef = std::pow(bl, -2.0L * m + 1.0L) *
                       (1.0L - std::pow(bl, static_cast<long double>(m)));
    long double hp = x * h - coef * hm;
    hm = h;
    h = hp;
  }
  const long double pref =
      std::pow(bl, 0.5L * n * n) /
      std::sqrt(static_cast<long double>(q_pochhammer(b, b, n)));
  return pref * h;
}

}  // namespace

DiscreteMeasure build_measure(const PolynomialFamily& fam, int k_max) {
  if (k_max < 0) throw DomainError("build_measure: k_max must be >= 0");
  require_restriction(fam);
  const LatticeGeometry g = geometry(fam);

  DiscreteMeasure m;
  m.kind = fam.kind;
  m.scale = g.scale;
  m.lattice_c = fam.lattice_c;
  m.k_max = k_max;

  if (g.type_I) {
    // signed atoms at +/- scale * b^k, each of weight (b^k/2)(b;b^2)_inf
    // / (b^2;b^2)_k; the two halves sum to total mass exactly 1
    const double head = q_pochhammer_inf(cplx{g.b, 0.0}, g.b * g.b).value.real();
    m.k_lo = 0;
    m.k_hi = k_max;
    double bk = 1.0, poch2 = 1.0;
    for (int k = 0; k <= k_max; ++k) {
      const double w = 0.5 * bk * head / poch2;
      const double x = g.scale * bk;
      m.atoms.push_back({x, w});
      m.atoms.push_back({-x, w});
      poch2 *= 1.0 - std::pow(g.b, 2.0 * (k + 1));
      bk *= g.b;
    }
  } else {
    const double c = fam.lattice_c;
    bool tail_ok = false;
    type_II_window(g.b, c, k_max, m.k_lo, m.k_hi, tail_ok);
    for (int k = m.k_lo; k <= m.k_hi; ++k) {
      const double w = std::exp(type_II_log_weight(g.b, c, k));
      const double x = g.scale * c * std::pow(g.b, k);
      m.atoms.push_back({x, w});
      m.atoms.push_back({-x, w});
    }
  }
  return m;
}

OrthogonalityCheck verify_orthogonality(const PolynomialFamily& fam, int m,
                                        int n, int k_max) {
  if (m < 0 || n < 0) throw DomainError("verify_orthogonality: negative degree");
  if (k_max < 0) throw DomainError("verify_orthogonality: k_max must be >= 0");
  require_restriction(fam);
  const LatticeGeometry g = geometry(fam);

  OrthogonalityCheck out;
  const double parity = ((m + n) % 2 == 0) ? 2.0 : 0.0;  // P_j(-x) = (-1)^j P_j(x)

  if (g.type_I) {
    const int n_max = std::max(m, n);
    const auto T = type_I_lattice_table(g.b, n_max, k_max);
    const double head = q_pochhammer_inf(cplx{g.b, 0.0}, g.b * g.b).value.real();
    long double lhs = 0.0L;
    double bk = 1.0, poch2 = 1.0;
    for (int k = 0; k <= k_max; ++k) {
      const double w = 0.5 * bk * head / poch2;
      lhs += static_cast<long double>(parity) * w *
             type_I_atom_value(g.b, T, m, k) * type_I_atom_value(g.b, T, n, k);
      poch2 *= 1.0 - std::pow(g.b, 2.0 * (k + 1));
      bk *= g.b;
    }
    out.lhs = static_cast<double>(lhs);
    out.rhs = (m == n) ? 1.0 : 0.0;
    // tail atoms sit below scale * b^{k_max}; the orthonormal values stay
    // O(1) there, so the left-over mass bounds the truncation error
    const double tail_mass = head / q_pochhammer_inf(cplx{g.b * g.b, 0.0},
                                                     g.b * g.b).value.real() *
                             std::pow(g.b, k_max + 1.0) / (1.0 - g.b);
    out.tail_ok = tail_mass * 4.0 < 1e-9;
  } else {
    // the summand w_k P_m P_n peaks near k = -(m+n)/2, far beyond where the
    // bare weight has decayed, so the sum runs the whole window and pairs
    // exp(log w) with the polynomial values in extended precision
    const double c = fam.lattice_c;
    long double lhs = 0.0L, boundary = 0.0L;
    for (int k = -k_max; k <= k_max; ++k) {
      const long double w = std::exp(static_cast<long double>(
          type_II_log_weight(g.b, c, k)));
      const long double term =
          static_cast<long double>(parity) * w *
          static_cast<long double>(type_II_atom_value_l(g.b, c, m, k)) *
          static_cast<long double>(type_II_atom_value_l(g.b, c, n, k));
      lhs += term;
      if (k == -k_max || k == k_max)
        boundary += std::fabs(static_cast<double>(
            w * type_II_atom_value_l(g.b, c, m, k) *
            type_II_atom_value_l(g.b, c, n, k)));
    }
    out.lhs = static_cast<double>(lhs);
    out.rhs = (m == n) ? type_II_rhs_constant(g.b, c) : 0.0;
    out.tail_ok =
        boundary <= 1e-11 * std::max(1.0, std::fabs(out.lhs));
  }
  out.abs_gap = std::fabs(out.lhs - out.rhs);
  return out;
}

SpectrumLattice analytic_spectrum(const PolynomialFamily& fam, int k_range) {
  if (k_range < 1) throw DomainError("analytic_spectrum: k_range must be >= 1");
  SpectrumLattice s;
  if (fam.kind == FamilyKind::classical) {
    // continuous spectrum (the whole real line); no lattice to emit
    s.applicable = false;
    s.accumulates_at_zero = false;
    return s;
  }
  require_restriction(fam);
  const LatticeGeometry g = geometry(fam);
  s.scale = g.scale;
  s.accumulates_at_zero = true;
  if (g.type_I) {
    s.k_lo = 0;
    s.k_hi = k_range - 1;
    double bk = 1.0;
    for (int k = 0; k < k_range; ++k) {
      s.points.push_back(g.scale * bk);
      s.points.push_back(-g.scale * bk);
      bk *= g.b;
    }
  } else {
    s.k_lo = -k_range;
    s.k_hi = k_range;
    for (int k = -k_range; k <= k_range; ++k) {
      const double x = g.scale * fam.lattice_c * std::pow(g.b, k);
      s.points.push_back(x);
      s.points.push_back(-x);
    }
  }
  return s;
}

SpectraComparison compare_spectra(const PolynomialFamily& fam, int dim,
                                  int top_k) {
  if (top_k < 1) throw DomainError("compare_spectra: top_k must be >= 1");
  if (dim < 4 * top_k)
    throw DomainError("compare_spectra: need dim >= 4 * top_k");
  SpectraComparison out;
  if (fam.kind == FamilyKind::classical) {
    out.applicable = false;
    return out;
  }
  require_restriction(fam);
  const LatticeGeometry g = geometry(fam);

  const int dims[3] = {dim / 4, dim / 2, dim};
  for (int d : dims) {
    SpectrumMatchRow row;
    row.dim = d;
    if (g.type_I) {
      std::vector<double> eig = truncated_position_spectrum(fam.params, d);
      row.smallest_abs = std::fabs(eig[0]);
      for (double e : eig) {
        row.smallest_abs = std::min(row.smallest_abs, std::fabs(e));
        if (std::fabs(e) < 0.1) ++row.near_zero_count;
      }
      // eigenvalues arrive sorted descending; the largest top_k pair with
      // the outermost positive lattice points scale * b^k
      double bk = 1.0;
      for (int k = 0; k < top_k; ++k) {
        const double target = g.scale * bk;
        row.rel_gaps.push_back(std::fabs(eig[k] - target) / target);
        bk *= g.b;
      }
    } else {
      // II-type matrices have norm ~ b^-dim; dense eigensolvers drown the
      // small eigenvalues in norm * epsilon of absolute error, so the
      // near-zero census comes from the tridiagonal inertia count, which
      // stays reliable at any scale.  Both spectral edges diverge with dim
      // and pair with no fixed lattice point, hence no rel_gaps.
      row.near_zero_count = eigenvalue_count_below(fam.params, d, 0.1) -
                            eigenvalue_count_below(fam.params, d, -0.1);
      if (d % 2 == 1) {
        row.smallest_abs = 0.0;  // zero-diagonal odd dim: 0 is an eigenvalue
      } else {
        const double lo0 = 1e-12;
        const int n0 = eigenvalue_count_below(fam.params, d, lo0);
        double lo = lo0, hi = 1.0;
        while (eigenvalue_count_below(fam.params, d, hi) == n0 && hi < 1e12)
          hi *= 2.0;
        for (int it = 0; it < 80; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (eigenvalue_count_below(fam.params, d, mid) > n0)
            hi = mid;
          else
            lo = mid;
        }
        row.smallest_abs = hi;
      }
    }
    out.rows.push_back(row);
  }
  if (g.type_I) {
    auto worst = [](const SpectrumMatchRow& r) {
      return *std::max_element(r.rel_gaps.begin(), r.rel_gaps.end());
    };
    // small slack: at large dims every gap sits at machine noise
    out.gaps_shrink = worst(out.rows[2]) <= worst(out.rows[0]) + 1e-14;
  }
  return out;
}

}  // namespace qosc
