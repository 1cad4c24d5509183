#include "doctest.h"

#include <cmath>
#include <random>

#include "qmeas/integrate.hpp"

using namespace qmeas;

namespace {

CMat pauli_x() {
  CMat s(2, 2);
  s << 0, 1, 1, 0;
  return s;
}

}  // namespace

TEST_SUITE("integrate") {
  TEST_CASE("zero Hamiltonian leaves the state alone") {
    const HamiltonianFn h = [](double) { return CMat::Zero(3, 3); };
    const auto traj = evolve_schrodinger(h, StateVector::basis(3, 0), {0.0, 5.0}, {0.01, 50});
    for (const auto& s : traj.states) CHECK(std::abs(s(0) - 1.0) < 1e-14);
    for (std::size_t i = 1; i < traj.times.size(); ++i) CHECK(traj.times[i] > traj.times[i - 1]);
    CHECK(traj.times.back() == doctest::Approx(5.0));
  }

  TEST_CASE("Rabi oscillation matches sin^2") {
    const double omega = 0.7;
    const HamiltonianFn h = [&](double) { return CMat(omega * pauli_x()); };
    const auto traj = evolve_schrodinger(h, StateVector::basis(2, 0), {0.0, 10.0}, {0.005, 20});
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i)
      worst = std::max(worst, std::abs(traj.states[i].population(1) - std::pow(std::sin(omega * traj.times[i]), 2)));
    CHECK(worst < 1e-9);
    CHECK(traj.stats.max_norm_drift < 1e-7);
    CHECK(schrodinger_step_halving(h, StateVector::basis(2, 0), {0.0, 10.0}, 0.01) < 1e-8);
  }

  TEST_CASE("Lindblad: no jumps and no Hamiltonian is the identity map") {
    CMat m(2, 2);
    m << 0.7, cplx(0.2, 0.1), cplx(0.2, -0.1), 0.3;
    const DensityOperator rho0(m);
    const HamiltonianFn h = [](double) { return CMat::Zero(2, 2); };
    const auto traj = evolve_lindblad(h, {}, rho0, {0.0, 3.0}, {0.01, 100});
    CHECK((traj.final_state().matrix() - m).norm() < 1e-14);
  }

  TEST_CASE("single dephasing jump decays the coherence at D/2") {
    const double D = 0.4, c0 = 0.3;
    CMat m(2, 2);
    m << 0.5, c0, c0, 0.5;
    CMat l = CMat::Zero(2, 2);
    l(0, 0) = std::sqrt(D);
    const HamiltonianFn h = [](double) { return CMat::Zero(2, 2); };
    const auto traj = evolve_lindblad(h, {l}, DensityOperator(m), {0.0, 5.0}, {0.01, 10});
    double worst = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i)
      worst = std::max(worst, std::abs(std::abs(traj.states[i](0, 1)) - c0 * std::exp(-D * traj.times[i] / 2.0)));
    CHECK(worst < 1e-6);
    CHECK(std::abs(traj.final_state()(0, 0) - 0.5) < 1e-14);
  }

  TEST_CASE("random Lindblad runs keep trace, hermiticity and positivity") {
    std::mt19937_64 rng(21);
    std::normal_distribution<double> g;
    for (int k = 0; k < 5; ++k) {
      const int dim = 3;
      CMat a(dim, dim), hm(dim, dim);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
          a(i, j) = cplx(g(rng), g(rng));
          hm(i, j) = cplx(g(rng), g(rng));
        }
      CMat rho = a * a.adjoint();
      rho /= rho.trace();
      hm = 0.5 * (hm + hm.adjoint()).eval();
      std::vector<CMat> jumps;
      for (int j = 0; j < 2; ++j) {
        CMat l(dim, dim);
        for (int r = 0; r < dim; ++r)
          for (int c = 0; c < dim; ++c) l(r, c) = 0.3 * cplx(g(rng), g(rng));
        jumps.push_back(l);
      }
      const HamiltonianFn h = [&](double t) { return CMat(hm * std::cos(t)); };
      const auto traj = evolve_lindblad(h, jumps, DensityOperator(rho), {0.0, 4.0}, {0.005, 40});
      for (const auto& s : traj.states) {
        CHECK(std::abs(s.trace() - 1.0) < 1e-7);
        CHECK(s.hermiticity_error() < 1e-8);
        CHECK(s.min_eigenvalue() > -1e-8);
      }
    }
  }

  TEST_CASE("pure dephasing never raises the purity") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 5; ++k) {
      CVec v(4);
      for (int i = 0; i < 4; ++i) v(i) = cplx(u(rng) - 0.5, u(rng) - 0.5);
      const DensityOperator rho0 = DensityOperator::pure(StateVector(v));
      std::vector<CMat> jumps;
      for (int j = 0; j < 3; ++j) {
        CMat l = CMat::Zero(4, 4);
        for (int i = 0; i < 4; ++i) l(i, i) = u(rng);
        jumps.push_back(l);
      }
      const HamiltonianFn h = [](double) { return CMat::Zero(4, 4); };
      const auto traj = evolve_lindblad(h, jumps, rho0, {0.0, 3.0}, {0.01, 5});
      for (std::size_t i = 1; i < traj.states.size(); ++i)
        CHECK(traj.states[i].purity() <= traj.states[i - 1].purity() + 1e-12);
    }
  }

  TEST_CASE("bad input is a configuration error") {
    const HamiltonianFn h = [](double) { return CMat::Zero(2, 2); };
    CHECK_THROWS_AS(evolve_schrodinger(h, StateVector::basis(2, 0), {0.0, 1.0}, {0.0, 1}), ConfigError);
    CHECK_THROWS_AS(evolve_schrodinger(h, StateVector::basis(3, 0), {0.0, 1.0}, {0.01, 1}), ConfigError);
    const HamiltonianFn nh = [](double) {
      CMat m = CMat::Zero(2, 2);
      m(0, 1) = 1.0;
      return m;
    };
    CHECK_THROWS_AS(evolve_schrodinger(nh, StateVector::basis(2, 0), {0.0, 1.0}, {0.01, 1}), ConfigError);
    CHECK_THROWS_AS(evolve_lindblad(h, {CMat::Zero(3, 3)}, DensityOperator::pure(StateVector::basis(2, 0)),
                                    {0.0, 1.0}, {0.01, 1}),
                    ConfigError);
  }
}
