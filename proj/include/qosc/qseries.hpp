#pragma once

// q-series primitives: finite and infinite q-shifted factorials and basic
// hypergeometric series, with certified truncation bounds where applicable.

#include <complex>
#include <vector>

#include "qosc/errors.hpp"

namespace qosc {

using cplx = std::complex<double>;

// Sum or product value together with a bound on the truncation remainder.
// For exactly-terminating series the bound is 0.
struct SeriesValue {
  cplx value{0.0, 0.0};
  double abs_error_bound = 0.0;
  int terms_used = 0;
};

// (a;q)_n = prod_{k=0}^{n-1} (1 - a q^k).  n = 0 gives 1.  Any real q.
cplx q_pochhammer(cplx a, double q, int n);
double q_pochhammer(double a, double q, int n);

// (a;q)_inf for 0 < q < 1.  Stops once the remaining product can change the
// value by a relative factor below tol; the bound is reported in absolute
// terms.  Throws DomainError for q outside (0,1).
SeriesValue q_pochhammer_inf(cplx a, double q, double tol = 1e-15);

// log of prod_{k>=0} (1 + s q^k) for s > 0, 0 < q < 1.  All factors exceed 1,
// so the log is a convergent sum of positive terms; safe for s up to ~1e300.
double log_shifted_product(double s, double q);

// ((a,c);(p,qq))_k = (a - c)(a p - c qq)(a p^2 - c qq^2) ... , k factors.
cplx double_pochhammer(cplx a, cplx c, cplx p, cplx qq, int k);

// Which basic hypergeometric series shape: r upper and s lower parameters.
// The n-th term carries [(-1)^n q^{n(n-1)/2}]^{1+s-r}; for phi21 that factor
// is 1, for phi11 it damps the tail, for phi20 it makes the non-terminating
// series divergent (radius zero), so phi20 is only summed when terminating.
enum class PhiKind { phi20, phi21, phi11 };

// Terminating series (an upper parameter equal to q^{-m} within 1e-9
// relative) are summed exactly over their nonzero terms.  Non-terminating
// series are summed until a geometric tail bound certifies rel_tol; throws
// ConvergenceError if the budget max_terms is exhausted first or the series
// diverges at z.
SeriesValue basic_hypergeometric(PhiKind kind,
                                 const std::vector<cplx>& upper,
                                 const std::vector<cplx>& lower,
                                 double q, cplx z,
                                 int max_terms = 4000,
                                 double rel_tol = 1e-15);

}  // namespace qosc
