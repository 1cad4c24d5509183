#include "doctest.h"

#include <cmath>
#include <random>

#include "qmeas/phase_space.hpp"

using namespace qmeas;

namespace {

CatState make_cat(double xa, double pa, double xb, double pb, double W, double c = 1.0, double phi = 0.0) {
  CatState cat;
  cat.a = {xa, pa, W, 1.0};
  cat.b = {xb, pb, W, 1.0};
  cat.c = c;
  cat.phi = phi;
  return cat;
}

}  // namespace

TEST_SUITE("phase_space") {
  TEST_CASE("single packet Wigner function peaks at 1/(pi hbar)") {
    const CatState single = make_cat(0.7, -0.3, 0.7, -0.3, 1.5, 0.0);
    CHECK(wigner_cat_at(single, 0.7, -0.3) == doctest::Approx(1.0 / (pi * hbar)).epsilon(1e-12));
    const double x = 1.2, p = 0.1;
    CHECK(wigner_cat_at(single, x, p) ==
          doctest::Approx(phase_gaussian(x, p, 0.7, -0.3, 1.5) / (pi * hbar)).epsilon(1e-12));
  }

  TEST_CASE("degenerate cat is four times a single packet before normalisation") {
    const CatState cat = make_cat(0.4, 0.2, 0.4, 0.2, 2.0);
    const CatState single = make_cat(0.4, 0.2, 0.4, 0.2, 2.0, 0.0);
    for (double x : {-1.0, 0.4, 2.0})
      CHECK(wigner_cat_at(cat, x, 0.5, false) == doctest::Approx(4.0 * wigner_cat_at(single, x, 0.5, true)).epsilon(1e-12));
  }

  TEST_CASE("momentum cat fringes have wavelength 2 pi hbar/p_D in x") {
    const double p_D = 2.0;
    const CatState cat = make_cat(0.0, 1.0, 0.0, -1.0, 4.0);
    const double lambda = 2.0 * pi * hbar / p_D;
    // Interference term is periodic in x with the fringe wavelength, modulo the envelope.
    const double w0 = wigner_interference_at(cat, 0.0, 0.0);
    const double w1 = wigner_interference_at(cat, lambda, 0.0);
    const double env = std::exp(-lambda * lambda / 16.0);
    CHECK(w1 == doctest::Approx(w0 * env).epsilon(1e-10));
    CHECK(wigner_interference_at(cat, 0.5 * lambda, 0.0) < 0.0);
  }

  TEST_CASE("closed-form grid integrates to one and reports its quadrature error") {
    const CatState cat = make_cat(3.0, 0.5, -3.0, -0.5, 1.0, 0.9, 0.4);
    const PhaseSpaceGrid g = wigner_cat(cat, {-12.0, 12.0, 241}, {-5.0, 5.0, 201});
    CHECK(std::abs(g.integral() - 1.0) <= 1e-8 + g.quadrature_error);
    const PhaseSpaceGrid q = husimi_cat(cat, {-14.0, 14.0, 281}, {-8.0, 8.0, 321});
    CHECK(q.values.minCoeff() > -1e-10);
    CHECK(q.integral() == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("kernel Wigner transform agrees with the closed form and its marginals") {
    const CatState cat = make_cat(2.0, 0.0, -2.0, 0.0, 1.0, 0.8, 0.3);
    const UniformAxis xs{-10.0, 10.0, 401};
    const UniformAxis ps{-4.0, 4.0, 81};
    const CMat k = cat_position_kernel(cat, xs);
    const PhaseSpaceGrid w = wigner(k, xs, ps, 4);
    double worst = 0.0;
    for (int i = 0; i < w.x.n; ++i)
      for (int j = 0; j < w.p.n; ++j) worst = std::max(worst, std::abs(w.values(i, j) - wigner_cat_at(cat, w.x.at(i), w.p.at(j))));
    CHECK(worst < 1e-8);
    const RVec pm = w.position_marginal();
    for (int i = 0; i < w.x.n; ++i) CHECK(pm(i) == doctest::Approx(k(4 * i, 4 * i).real()).epsilon(1e-6));
    CHECK(w.values.imag().norm() == 0.0);
  }

  TEST_CASE("overlap formula on random Gaussian pairs") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const UniformAxis xs{-10.0, 10.0, 201};
    const UniformAxis ps{-5.0, 5.0, 201};
    for (int k = 0; k < 5; ++k) {
      const double xa = u(rng), pa = u(rng), xb = u(rng), pb = u(rng);
      const CatState a = make_cat(xa, pa, xa, pa, 1.3, 0.0);
      const CatState b = make_cat(xb, pb, xb, pb, 1.3, 0.0);
      const PhaseSpaceGrid wa = wigner_cat(a, xs, ps), wb = wigner_cat(b, xs, ps);
      const double exact = std::norm(overlap(b.a, a.a));
      CHECK(wigner_overlap(wa, wb) == doctest::Approx(exact).epsilon(1e-6));
    }
  }

  TEST_CASE("coarse grids are refused") {
    const CatState cat = make_cat(20.0, 0.0, -20.0, 0.0, 4.0);
    CHECK_THROWS_AS(wigner_cat(cat, {-30.0, 30.0, 101}, {-2.0, 2.0, 11}), ConfigError);
    const UniformAxis xs{-10.0, 10.0, 51};
    CHECK_THROWS_AS(wigner(cat_position_kernel(make_cat(0, 0, 0, 0, 1.0, 0.0), xs), xs, {-20.0, 20.0, 11}), ConfigError);
    CHECK_THROWS_AS((UniformAxis{1.0, 0.0, 5}.validate("x")), ConfigError);
  }
}
