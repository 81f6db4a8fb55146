#include "qosc/qseries.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace qosc {

cplx q_pochhammer(cplx a, double q, int n) {
  if (n < 0) throw DomainError("q_pochhammer: negative length");
  cplx prod{1.0, 0.0};
  cplx aq = a;
  for (int k = 0; k < n; ++k) {
    prod *= (1.0 - aq);
    aq *= q;
  }
  return prod;
}

double q_pochhammer(double a, double q, int n) {
  if (n < 0) throw DomainError("q_pochhammer: negative length");
  double prod = 1.0;
  double aq = a;
  for (int k = 0; k < n; ++k) {
    prod *= (1.0 - aq);
    aq *= q;
  }
  return prod;
}

SeriesValue q_pochhammer_inf(cplx a, double q, double tol) {
  if (!(q > 0.0 && q < 1.0))
    throw DomainError("q_pochhammer_inf: base must lie in (0,1)");
  SeriesValue out;
  cplx prod{1.0, 0.0};
  cplx aq = a;
  int k = 0;
  const int kcap = 100000;
  double tail_log = 0.0;
  for (; k < kcap; ++k) {
    double t = std::abs(aq);
    if (t < 1.0) {
      // |log prod_{j>=k}(1-aq^j)| <= t/((1-q)(1-t)); stop once that is
      // below tol, i.e. the remaining factors are a relative no-op.
      tail_log = t / ((1.0 - q) * (1.0 - t));
      if (tail_log <= tol) break;
    }
    prod *= (1.0 - aq);
    aq *= q;
  }
  out.value = prod;
  out.terms_used = k;
  out.abs_error_bound = std::abs(prod) * std::expm1(tail_log);
  return out;
}

double log_shifted_product(double s, double q) {
  if (!(q > 0.0 && q < 1.0))
    throw DomainError("log_shifted_product: base must lie in (0,1)");
  if (!(s >= 0.0))
    throw DomainError("log_shifted_product: factor offset must be >= 0");
  double acc = 0.0;
  double sq = s;
  for (int k = 0; k < 100000; ++k) {
    if (sq < 1e-18) {
      acc += sq / (1.0 - q);  // remaining log1p terms, summed geometrically
      break;
    }
    acc += std::log1p(sq);
    sq *= q;
  }
  return acc;
}

cplx double_pochhammer(cplx a, cplx c, cplx p, cplx qq, int k) {
  if (k < 0) throw DomainError("double_pochhammer: negative length");
  cplx prod{1.0, 0.0};
  cplx ap{1.0, 0.0}, cq{1.0, 0.0};
  for (int j = 0; j < k; ++j) {
    prod *= (a * ap - c * cq);
    ap *= p;
    cq *= qq;
  }
  return prod;
}

namespace {

// Smallest m >= 0 with upper = q^{-m}, or -1 if no upper parameter is a
// negative power of the base.  Detection is tolerant of pow() rounding but
// far tighter than any spacing between genuine parameter values in use.
// Works for bases on either side of 1 (q^{-m} is > 1 or < 1 accordingly).
int termination_index(const std::vector<cplx>& upper, double q, int scan) {
  int best = -1;
  for (const cplx& u : upper) {
    if (u.imag() != 0.0 || u.real() <= 0.0) continue;
    double uq = u.real();
    if (q < 1.0 ? uq < 1.0 - 1e-9 : uq > 1.0 + 1e-9) continue;
    for (int m = 0; m <= scan; ++m) {
      if (std::fabs(uq - 1.0) <= 1e-9) {
        if (best < 0 || m < best) best = m;
        break;
      }
      uq *= q;
      if (q < 1.0 ? uq < 0.5 : uq > 2.0) break;  // passed 1, no match ahead
    }
  }
  return best;
}

}  // namespace

SeriesValue basic_hypergeometric(PhiKind kind,
                                 const std::vector<cplx>& upper,
                                 const std::vector<cplx>& lower,
                                 double q, cplx z,
                                 int max_terms, double rel_tol) {
  size_t r = 0, s = 0;
  switch (kind) {
    case PhiKind::phi20: r = 2; s = 0; break;
    case PhiKind::phi21: r = 2; s = 1; break;
    case PhiKind::phi11: r = 1; s = 1; break;
  }
  if (upper.size() != r || lower.size() != s)
    throw DomainError("basic_hypergeometric: parameter count mismatch");
  if (!(q > 0.0) || q == 1.0)
    throw DomainError("basic_hypergeometric: base must be positive and != 1");

  const int extra = 1 + static_cast<int>(s) - static_cast<int>(r);
  const int term_at = termination_index(upper, q, max_terms);

  SeriesValue out;
  cplx sum{0.0, 0.0};
  cplx term{1.0, 0.0};
  double qk = 1.0;  // q^k
  int k = 0;
  for (;; ++k) {
    sum += term;
    if (term_at >= 0 && k == term_at) {
      out.value = sum;
      out.terms_used = k + 1;
      out.abs_error_bound = 0.0;
      return out;
    }
    if (k >= max_terms)
      throw ConvergenceError("basic_hypergeometric: term budget exhausted");

    cplx ratio = z;
    for (const cplx& u : upper) ratio *= (1.0 - u * qk);
    for (const cplx& l : lower) ratio /= (1.0 - l * qk);
    ratio /= (1.0 - q * qk);
    // ratio of the sign/triangular-power factors between terms k and k+1
    if (extra == 1) ratio *= -qk;
    else if (extra == -1) ratio *= -1.0 / qk;

    cplx next = term * ratio;

    if (term_at < 0 && q < 1.0) {
      // Uniform bound on all later term ratios: parameter factors only move
      // toward 1 as k grows, and the q^k damping (phi11) only shrinks.
      double rbound = std::abs(z);
      for (const cplx& u : upper) rbound *= (1.0 + std::abs(u) * qk * q);
      for (const cplx& l : lower) {
        double d = 1.0 - std::abs(l) * qk * q;
        if (d <= 0.0) { rbound = -1.0; break; }
        rbound /= d;
      }
      if (rbound >= 0.0) {
        rbound /= (1.0 - q * qk * q);
        if (extra == 1) rbound *= qk * q;
        else if (extra == -1) rbound = -1.0;  // growing ratios, no bound
        if (rbound >= 0.0 && rbound < 1.0) {
          double tail = std::abs(next) / (1.0 - rbound);
          if (tail <= rel_tol * std::max(std::abs(sum), 1e-300)) {
            out.value = sum;
            out.terms_used = k + 1;
            out.abs_error_bound = tail;
            return out;
          }
        }
      }
    } else if (term_at < 0 && q > 1.0) {
      throw ConvergenceError(
          "basic_hypergeometric: non-terminating series with base > 1");
    }
    term = next;
    qk *= q;
  }
}

}  // namespace qosc
