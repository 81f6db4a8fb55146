#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "qosc/coherent.hpp"

using namespace qosc;
using std::abs;

namespace {

// closed forms of the factorial squared: q^{alpha n(n+1) + beta n}
// (q';q')_n / (1-q')^n, specialized per family in the tests
double closed_factorial_sq_log(const DeformationParams& p, int n) {
  const double b = p.qprime();
  double poch_log = 0.0;
  for (int m = 1; m <= n; ++m) poch_log += std::log(std::fabs(1.0 - std::pow(b, m)));
  return (p.alpha * n * (n + 1.0) + p.beta * n) * std::log(p.q) + poch_log -
         n * std::log(std::fabs(1.0 - b));
}

}  // namespace

TEST_CASE("structure factorial: empty product and hand value") {
  for (auto pr : {Preset::classical, Preset::hermite_I, Preset::hermite_II})
    CHECK(structure_factorial(preset(pr, 0.5), 0) == 1.0);
  // hermite_I, q=0.5, n=2: f0 f1 = 1 * sqrt(0.75)
  CHECK(structure_factorial(preset(Preset::hermite_I, 0.5), 2) ==
        doctest::Approx(std::sqrt(0.75)).epsilon(1e-14));
  // frozen with 40-digit arithmetic
  CHECK(structure_factorial(preset(Preset::hermite_I, 0.5), 5) ==
        doctest::Approx(0.096501967335941039094).epsilon(1e-13));
  CHECK(structure_factorial(preset(Preset::hermite_II, 0.5), 6) ==
        doctest::Approx(141981.37117241824975).epsilon(1e-12));
}

TEST_CASE("structure factorial matches the closed forms, n <= 20") {
  // hermite-I form sqrt(q^{n(n-1)/2} (q;q)_n / (1-q)^n)
  for (double q : {0.3, 0.5, 0.8}) {
    auto p = preset(Preset::hermite_I, q);
    for (int n = 0; n <= 20; ++n) {
      const double closed = std::sqrt(std::pow(q, 0.5 * n * (n - 1.0)) *
                                      q_pochhammer(q, q, n) /
                                      std::pow(1.0 - q, n));
      CHECK(structure_factorial(p, n) ==
            doctest::Approx(closed).epsilon(1e-12));
    }
  }
  // generalized forms (one I-restricted, one II-restricted point)
  for (auto p : {make_params(1.0, -0.5, 3.0, 0.5),
                 make_params(-2.0, 1.0, 3.0, 0.5),
                 make_params(-1.0, 2.0, 2.0, 0.3)}) {
    for (int n = 0; n <= 20; ++n) {
      const double lg = 2.0 * log_structure_factorial(p, n);
      CHECK(lg == doctest::Approx(closed_factorial_sq_log(p, n))
                      .epsilon(1e-12)
                      .scale(std::max(1.0, std::fabs(lg))));
    }
  }
}

TEST_CASE("vacuum and zero states") {
  auto p = preset(Preset::hermite_II, 0.5);
  CoherentState s = coherent_state(p, cplx{0.0, 0.0}, 10);
  CHECK(s.coefficients[0] == cplx{1.0, 0.0});
  for (int n = 1; n < 10; ++n) CHECK(s.coefficients[n] == cplx{0.0, 0.0});
  CHECK(s.norm_factor == 1.0);
  CHECK(s.tail_bound == 0.0);
  CHECK(s.tail_certified);
  CHECK(eigen_residual(s, p) == 0.0);
  CHECK_THROWS_AS(coherent_state(p, cplx{0.1, 0.0}, 0), DomainError);
}

TEST_CASE("coefficients satisfy the defining ratio") {
  auto p = preset(Preset::hermite_II, 0.5);
  const cplx z{0.3, 0.4};
  CoherentState s = coherent_state(p, z, 50);
  long double ssq = 0.0L;
  for (const auto& c : s.coefficients) ssq += std::norm(c);
  CHECK(static_cast<double>(ssq) == doctest::Approx(1.0).epsilon(1e-13));
  for (int n = 0; n + 1 < 50; ++n) {
    const cplx a = s.coefficients[n + 1] * structure_function(p, n);
    const cplx b = s.coefficients[n] * z;
    if (abs(s.coefficients[n]) > 1e-290 && abs(s.coefficients[n + 1]) > 1e-290)
      CHECK(abs(a - b) <= 1e-13 * std::max(1.0, abs(b)));
  }
  CHECK(s.tail_certified);
  CHECK(s.tail_bound <= 1e-30);  // growing ladder: edge ratio is tiny
}

TEST_CASE("eigen-relation residual across the families") {
  const std::vector<DeformationParams> fams{
      preset(Preset::hermite_I, 0.3),  preset(Preset::hermite_I, 0.5),
      make_params(1.0, -0.5, 3.0, 0.5), make_params(1.0, -0.5, 3.0, 0.3),
      preset(Preset::hermite_II, 0.3), preset(Preset::hermite_II, 0.5),
      make_params(-2.0, 1.0, 3.0, 0.5), preset(Preset::classical, 0.5),
      preset(Preset::biedenharn_macfarlane_a, 0.5),       preset(Preset::biedenharn_macfarlane_b, 0.5)};
  const std::vector<cplx> zs{cplx{1.0, 0.0},
                             std::polar(0.5, 3.14159265358979 / 3.0)};
  for (const auto& p : fams)
    for (const auto& z : zs) {
      CoherentState s = coherent_state(p, z, 200);
      CHECK(eigen_residual(s, p) <= 1e-10);
    }
}

TEST_CASE("decaying ladders: construction succeeds, certification fails") {
  auto p = preset(Preset::hermite_I, 0.5);
  CoherentState s = coherent_state(p, cplx{1.0, 0.0}, 200);
  CHECK_FALSE(s.tail_certified);
  CHECK(std::isinf(s.tail_bound));
  CHECK(std::isinf(s.norm_factor));   // 2-norm of the formal expansion
  CHECK(std::isfinite(s.log_norm_factor));
  CHECK(s.log_norm_factor > 100.0);
  // normalized mass still 1, mass concentrated at the truncation edge
  long double ssq = 0.0L;
  for (const auto& c : s.coefficients) ssq += std::norm(c);
  CHECK(static_cast<double>(ssq) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(abs(s.coefficients[199]) > abs(s.coefficients[100]));
  CHECK_THROWS_AS(coherent_state(p, cplx{1.0, 0.0}, 200, true),
                  TruncationError);
  // growing ladder certifies fine
  CHECK_NOTHROW(coherent_state(preset(Preset::hermite_II, 0.5),
                               cplx{1.0, 0.0}, 200, true));
}

TEST_CASE("overlaps: normalization, vacuum projection, series consistency") {
  auto p = preset(Preset::hermite_II, 0.5);
  const cplx z1{0.4, 0.15}, z2{-0.25, 0.1};
  CoherentState s1 = coherent_state(p, z1, 120);
  CoherentState s2 = coherent_state(p, z2, 120);
  CHECK(abs(overlap(s1, s1) - 1.0) <= 1e-12);
  CHECK(abs(overlap(s2, s2) - 1.0) <= 1e-12);
  CHECK(abs(overlap(s1, s2)) <= 1.0 + 1e-12);
  // <0|z> = 1/N with the truncated norm
  CoherentState vac = coherent_state(p, cplx{0.0, 0.0}, 120);
  CHECK(abs(overlap(vac, s1) - std::exp(-s1.log_norm_factor)) <= 1e-12);
  // independent route: sum (conj z1 z2)^n / (f!)^2 over the same order,
  // normalized by the defining N^2 sums
  cplx num{0.0, 0.0};
  const cplx w = std::conj(z1) * z2;
  for (int n = 0; n < 120; ++n)
    num += std::pow(w, cplx(static_cast<double>(n), 0.0)) *
           std::exp(-2.0 * log_structure_factorial(p, n));
  const double d1 = normalization_factor(p, std::norm(z1));
  const double d2 = normalization_factor(p, std::norm(z2));
  CHECK(abs(overlap(s1, s2) - num / std::sqrt(d1 * d2)) <= 1e-12);
  // conjugate-linear first slot
  CHECK(abs(overlap(s1, s2) - std::conj(overlap(s2, s1))) <= 1e-14);
  // parameter mismatch rejected
  CoherentState other = coherent_state(preset(Preset::hermite_II, 0.3),
                                       cplx{0.1, 0.0}, 40);
  CHECK_THROWS_AS(overlap(s1, other), DomainError);
}

TEST_CASE("hermite-I overlap against the inverse-power series form") {
  // coefficient identity behind the printed 2phi0 form:
  // 1/(f_{n-1}!)^2 = (1-q)^n q^{-n(n-1)/2} / (q;q)_n
  for (double q : {0.3, 0.5}) {
    auto p = preset(Preset::hermite_I, q);
    for (int n = 0; n <= 20; ++n) {
      const double lhs = -2.0 * log_structure_factorial(p, n);
      const double rhs = n * std::log(1.0 - q) -
                         0.5 * n * (n - 1.0) * std::log(q) -
                         std::log(q_pochhammer(q, q, n));
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12).scale(
                       std::max(1.0, std::fabs(lhs))));
    }
  }
  // the series itself has zero radius, so the only finite reading of the
  // printed overlap form is at matched truncation order
  auto p = preset(Preset::hermite_I, 0.5);
  const int N = 60;
  for (auto zz : {std::pair<cplx, cplx>{{0.5, 0.0}, {0.5, 0.0}},
                  std::pair<cplx, cplx>{{0.5, 0.0}, {0.3, 0.0}},
                  std::pair<cplx, cplx>{{0.2, 0.3}, {-0.1, 0.4}}}) {
    CoherentState s1 = coherent_state(p, zz.first, N);
    CoherentState s2 = coherent_state(p, zz.second, N);
    // the raw partial terms overflow double at this order; shift every
    // exponent by the largest factorial so the normalized ratio survives
    const double shift = 2.0 * log_structure_factorial(p, N - 1);
    auto shifted = [&](cplx u) {
      cplx acc{0.0, 0.0};
      for (int n = 0; n < N; ++n)
        acc += std::pow(u, cplx(static_cast<double>(n), 0.0)) *
               std::exp(shift - 2.0 * log_structure_factorial(p, n));
      return acc;
    };
    const cplx closed =
        shifted(std::conj(zz.first) * zz.second) /
        std::sqrt(shifted(cplx{std::norm(zz.first), 0.0}).real() *
                  shifted(cplx{std::norm(zz.second), 0.0}).real());
    CHECK(abs(overlap(s1, s2) - closed) <= 1e-10);
  }
}

TEST_CASE("normalization factor: defining series and frozen values") {
  // frozen with 40-digit arithmetic
  auto g2 = preset(Preset::hermite_II, 0.5);
  CHECK(normalization_factor(g2, 0.0) == 1.0);
  CHECK(normalization_factor(g2, 1.0) ==
        doctest::Approx(2.172668750849663656).epsilon(1e-12));
  CHECK(normalization_factor(g2, 2.0) ==
        doctest::Approx(3.7150825684597657998).epsilon(1e-12));
  CHECK(normalization_factor(preset(Preset::hermite_II, 0.3), 1.0) ==
        doctest::Approx(2.0696344078936602488).epsilon(1e-12));
  // the two Biedenharn-Macfarlane presentations share one ladder
  CHECK(normalization_factor(preset(Preset::biedenharn_macfarlane_a, 0.5), 1.0) ==
        doctest::Approx(2.4837057883305724947).epsilon(1e-12));
  CHECK(normalization_factor(preset(Preset::biedenharn_macfarlane_b, 0.5), 1.0) ==
        doctest::Approx(2.4837057883305724947).epsilon(1e-12));
  // classical ladder: N^2 = e^{zsq}
  CHECK(normalization_factor(preset(Preset::classical, 0.5), 1.0) ==
        doctest::Approx(std::exp(1.0)).epsilon(1e-12));
  CHECK(normalization_factor(preset(Preset::classical, 0.5), 2.5) ==
        doctest::Approx(std::exp(2.5)).epsilon(1e-12));
}

TEST_CASE("normalization factor: radius handling") {
  // decaying ladder: zero radius
  CHECK_THROWS_AS(normalization_factor(preset(Preset::hermite_I, 0.5), 1.0),
                  ConvergenceError);
  CHECK_THROWS_AS(normalization_factor(preset(Preset::hermite_I, 0.5), 1e-6),
                  ConvergenceError);
  // plateau ladder: finite radius L^2 = q^{beta} / (1 - q')
  auto plat = make_params(0.0, 0.4, 2.0, 0.5);
  const double L2 = 1.5157165665103980823;  // frozen
  CHECK(normalization_factor(plat, 0.9 * L2) ==
        doctest::Approx(29.646410891353107752).epsilon(1e-10));
  CHECK_THROWS_AS(normalization_factor(plat, L2), ConvergenceError);
  CHECK_THROWS_AS(normalization_factor(plat, 2.0), ConvergenceError);
  CHECK_THROWS_AS(normalization_factor(plat, -0.5), DomainError);
}

TEST_CASE("normalization factor matches the printed generalized-II series") {
  // printed: sum q^{-alpha n(n+1)} / (q';q')_n ((1-q')/q^beta zsq)^n
  auto p = preset(Preset::hermite_II, 0.5);
  const double b = p.qprime();
  for (double zsq : {0.5, 1.0, 2.0}) {
    long double acc = 0.0L, poch = 1.0L;
    for (int n = 0; n <= 200; ++n) {
      acc += std::pow(p.q, -p.alpha * n * (n + 1.0)) / poch *
             std::pow((1.0 - b) / std::pow(p.q, p.beta) * zsq, n);
      poch *= 1.0L - std::pow(b, n + 1.0);
    }
    CHECK(normalization_factor(p, zsq) ==
          doctest::Approx(static_cast<double>(acc)).epsilon(1e-10));
  }
}

TEST_CASE("type-II generating identity holds on the grid") {
  for (double q : {0.3, 0.5, 0.8}) {
    auto fam = discrete_family_II(q);
    for (double x : {0.0, 0.5, -0.5}) {
      for (double t : {0.1, 0.2}) {
        GeneratingFunctionCheck c =
            generating_function_check(fam, x, cplx{t, 0.0});
        CHECK(c.gap <= 1e-8);
        CHECK_FALSE(c.identity_mismatch);
      }
    }
  }
  // complex t inside the convergence region
  GeneratingFunctionCheck c =
      generating_function_check(discrete_family_II(0.5), 0.5, cplx{0.1, 0.05});
  CHECK(c.gap <= 1e-8);
  // t = 0: both sides exactly 1
  GeneratingFunctionCheck c0 =
      generating_function_check(discrete_family_II(0.5), 0.7, cplx{0.0, 0.0});
  CHECK(c0.series_side == cplx{1.0, 0.0});
  CHECK(c0.closed_side == cplx{1.0, 0.0});
  CHECK(c0.gap == 0.0);
}

TEST_CASE("generalized-II generating identity on the restriction") {
  struct Pt {
    DeformationParams p;
    double x, t;
  };
  const std::vector<Pt> pts{{make_params(-2.0, 1.0, 3.0, 0.5), 0.5, 0.2},
                            {make_params(-1.0, 2.0, 2.0, 0.5), -0.5, 0.1},
                            {make_params(-0.5, 0.7, 1.5, 0.3), 1.0, 0.15}};
  for (const auto& pt : pts) {
    auto fam = generalized_family_II(pt.p);
    GeneratingFunctionCheck c =
        generating_function_check(fam, pt.x, cplx{pt.t, 0.0});
    CHECK(c.gap <= 1e-8);
    CHECK_FALSE(c.identity_mismatch);
  }
  // off the restriction: rejected
  CHECK_THROWS_AS(generating_function_check(
                      generalized_family_II(make_params(0.5, 1.0, 2.0, 0.5)),
                      0.5, cplx{0.1, 0.0}),
                  RestrictionError);
}

TEST_CASE("I-type generating identities have zero radius") {
  CHECK_THROWS_AS(generating_function_check(discrete_family_I(0.5), 0.5,
                                            cplx{0.2, 0.0}),
                  ConvergenceError);
  CHECK_THROWS_AS(generating_function_check(
                      generalized_family_I(make_params(1.0, -0.5, 3.0, 0.5)),
                      0.5, cplx{0.1, 0.0}),
                  ConvergenceError);
  // the t = 0 point is the only finite evaluation
  GeneratingFunctionCheck c =
      generating_function_check(discrete_family_I(0.5), 0.5, cplx{0.0, 0.0});
  CHECK(c.gap == 0.0);
  CHECK_THROWS_AS(
      generating_function_check(classical_family(), 0.5, cplx{0.1, 0.0}),
      DomainError);
}
