#include "doctest.h"

#include <cmath>

#include "qmeas/collision.hpp"

using namespace qmeas;

namespace {

double simpson(const std::function<double(double)>& f, double lo, double hi, int n) {
  const double h = (hi - lo) / n;
  double s = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(lo + h * i);
  return s * h / 3.0;
}

}  // namespace

TEST_SUITE("collision") {
  TEST_CASE("scattered labels conserve momentum, energy and centre of mass") {
    for (double a : {0.1, 0.5, 1.0, 3.0}) {
      const CollisionInput in{{4.0, -0.7, 2.0, 1.0}, {-9.0, 1.1, 2.0 / std::sqrt(a), a}};
      const ScatterResult s = scatter(in);
      CHECK(s.brownian.p + s.gas.p == doctest::Approx(in.brownian.p + in.gas.p).epsilon(1e-14));
      CHECK(s.brownian.p * s.brownian.p + s.gas.p * s.gas.p / a ==
            doctest::Approx(in.brownian.p * in.brownian.p + in.gas.p * in.gas.p / a).epsilon(1e-13));
      CHECK(s.brownian.x + a * s.gas.x == doctest::Approx(in.brownian.x + a * in.gas.x).epsilon(1e-13));
      CHECK(s.brownian.width == in.brownian.width);
      CHECK(s.gas.width == in.gas.width);
    }
    const ScatterResult swap = scatter({{4.0, -0.7, 2.0, 1.0}, {-9.0, 1.1, 2.0, 1.0}});
    CHECK(swap.brownian.p == doctest::Approx(1.1));
    CHECK(swap.brownian.x == doctest::Approx(-9.0));
  }

  TEST_CASE("centre-of-mass frame and validity") {
    const CollisionInput in = com_frame(10.0, -2.0, 1.0, 0.3, 4.0);
    CHECK(in.brownian.p + in.gas.p == 0.0);
    CHECK(in.brownian.mass * in.brownian.x + in.gas.mass * in.gas.x == doctest::Approx(0.0));
    const ValidityReport r = validity(in);
    CHECK(r.matched_widths);
    CHECK(r.ok());
    const double spread = std::sqrt(in.brownian.width * in.brownian.width + in.gas.width * in.gas.width);
    CHECK(r.t_c == doctest::Approx(2.0 * spread / std::abs(in.brownian.velocity() - in.gas.velocity())));

    const CollisionInput still{{5.0, 1.0, 1.0, 1.0}, {-5.0, 0.5, 1.0, 0.5}};
    const ValidityReport rs = validity(still);
    CHECK(std::isinf(rs.t_c));
    CHECK_FALSE(rs.ok());
    CHECK_FALSE(validity(com_frame(1.0, -2.0, 1.0, 0.3, 4.0)).overlap_ok);
    CHECK_THROWS_AS(com_frame(1.0, 1.0, 1.0, 0.0, 1.0), ConfigError);
  }

  TEST_CASE("entanglement coefficient") {
    CHECK(entanglement_coefficient(2.0, 2.0 / std::sqrt(0.3), 1.0, 0.3) == doctest::Approx(0.0).scale(1.0));
    CHECK(entanglement_coefficient(2.0, 5.0, 1.0, 1.0) == 0.0);
    CHECK(entanglement_coefficient(2.0, 1.0, 1.0, 0.3) != 0.0);
    CHECK_THROWS_AS(entanglement_coefficient(0.0, 1.0, 1.0, 1.0), ConfigError);
  }

  TEST_CASE("free evolution") {
    const GaussianLabel l{1.5, -0.8, 1.3, 2.0};
    for (double x : {-1.0, 0.5, 2.7}) CHECK(std::abs(free_wavefunction(l, 0.0, x) - l.wavefunction(x)) < 1e-14);
    const double norm = simpson([&](double x) { return std::norm(free_wavefunction(l, 6.0, x)); }, -40.0, 40.0, 4000);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
    const double mean =
        simpson([&](double x) { return x * std::norm(free_wavefunction(l, 6.0, x)); }, -40.0, 40.0, 4000);
    CHECK(mean == doctest::Approx(l.x + l.p * 6.0 / l.mass).epsilon(1e-10));
  }

  TEST_CASE("hard-core wavefunction") {
    const CollisionInput in = com_frame(10.0, -2.0, 1.0, 0.3, 4.0);
    for (double t : {0.0, 3.0, 5.0, 9.0})
      for (double x : {-3.0, 0.0, 2.5}) {
        CHECK(std::abs(two_particle_wavefunction(in, t, x, x)) < 1e-13);
        CHECK(two_particle_wavefunction(in, t, x + 0.1, x) == cplx(0.0));
      }
    // Well before contact the mirror term is negligible.
    const cplx free = free_wavefunction(in.gas, 0.0, -33.0) * free_wavefunction(in.brownian, 0.0, 10.0);
    CHECK(std::abs(two_particle_wavefunction(in, 0.0, -33.0, 10.0) - free) < 1e-12);
  }

  TEST_CASE("in-collision position density") {
    const CollisionInput in = com_frame(10.0, -2.0, 1.0, 0.3, 4.0);
    for (double x : {-6.0, -1.0, 0.0, 3.0, 8.0}) {
      const double closed = in_collision_position_density(in, 5.0, x);
      CHECK(in_collision_position_density_quadrature(in, 5.0, x, 20001) == doctest::Approx(closed).epsilon(1e-6));
    }
    const double total = simpson([&](double x) { return in_collision_position_density_exact(in, 5.0, x, 4001); },
                                 -40.0, 40.0, 400);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-3));
    // Before the collision the Brownian density is the free one.
    for (double x : {6.0, 10.0, 13.0})
      CHECK(in_collision_position_density(in, 0.0, x) ==
            doctest::Approx(std::norm(free_wavefunction(in.brownian, 0.0, x))).epsilon(1e-9));
    CHECK_THROWS_AS(in_collision_position_density({{5.0, -1.0, 1.0, 1.0}, {-9.0, 1.0, 1.0, 1.0}}, 1.0, 0.0),
                    ConfigError);
  }

  TEST_CASE("in-collision momentum density") {
    const CollisionInput in = com_frame(10.0, -2.0, 1.0, 0.3, 4.0);
    const UniformAxis xs{-20.0, 20.0, 500}, xg{-40.0, 40.0, 500}, ps{-4.0, 4.0, 161};
    const RVec before = in_collision_momentum_density(in, 0.0, {-10.0, 30.0, 500}, {-70.0, 0.0, 500}, ps);
    Eigen::Index k = 0;
    before.maxCoeff(&k);
    CHECK(ps.at(static_cast<int>(k)) == doctest::Approx(-2.0).epsilon(0.03));
    const RVec after = in_collision_momentum_density(in, 20.0, {-20.0, 70.0, 700}, {-140.0, 60.0, 500}, ps);
    after.maxCoeff(&k);
    CHECK(ps.at(static_cast<int>(k)) == doctest::Approx(2.0).epsilon(0.03));
    CHECK_THROWS_AS(in_collision_momentum_density(in, 5.0, xs, xg, {-100.0, 100.0, 11}), ConfigError);
  }

  TEST_CASE("cat collision") {
    const double W = 2.0, a = 0.4;
    CatState cat{{6.0, -1.0, W, 1.0}, {3.0, -1.5, W, 1.0}, 0.9, 0.3};
    const GaussianLabel gas{-10.0, 1.0, W / std::sqrt(a), a};
    const CatState out = collide_cat(cat, gas);
    CHECK(out.c <= cat.c);
    CHECK(out.c > 0.0);
    const ScatterResult ra = scatter({cat.a, gas});
    CHECK(out.a.p == doctest::Approx(ra.brownian.p));
    CatState same{cat.a, cat.a, 0.9, 0.3};
    const CatState s2 = collide_cat(same, gas);
    CHECK(s2.c == doctest::Approx(0.9).epsilon(1e-14));
    CHECK(s2.phi == doctest::Approx(0.3).epsilon(1e-14));
    CHECK_THROWS_AS(collide_cat(cat, {-10.0, 1.0, W, a}), ConfigError);
  }
}
