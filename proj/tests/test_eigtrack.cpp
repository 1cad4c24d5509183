#include "doctest.h"

#include <cmath>
#include <vector>

#include "qmeas/ctap.hpp"
#include "qmeas/eigtrack.hpp"

using namespace qmeas;

TEST_SUITE("eigtrack") {
  TEST_CASE("constant Hamiltonian gives constant curves") {
    CMat h(3, 3);
    h << 1, 0.2, 0, 0.2, -1, I, 0, -I, 0.5;
    const std::vector<CMat> seq(10, h);
    const TrackedSpectrum s = eig_tracked(seq);
    for (int b = 0; b < 3; ++b)
      for (double e : s.curve(b)) CHECK(e == doctest::Approx(s.energies.front()(b)).epsilon(1e-14));
    CHECK(s.anticrossings.empty());
  }

  TEST_CASE("two-level avoided crossing has minimal gap 2 epsilon") {
    const double eps = 0.03;
    const HamiltonianFn h = [&](double t) {
      CMat m(2, 2);
      m << t, eps, eps, -t;
      return m;
    };
    std::vector<double> times;
    for (int i = 0; i <= 200; ++i) times.push_back(-1.0 + 0.01 * i + 0.0037);
    const auto mins = gap_minima(h, times);
    REQUIRE_FALSE(mins.empty());
    CHECK(mins.front().gap == doctest::Approx(2.0 * eps).epsilon(1e-8));
    CHECK(std::abs(mins.front().time) < 1e-6);

    std::vector<CMat> seq;
    for (double t : times) seq.push_back(h(t));
    const TrackedSpectrum s = eig_tracked(seq, 0.1);
    REQUIRE(s.anticrossings.size() == 1);
    CHECK(s.anticrossings.front().gap < 2.0 * eps + 1e-3);
  }

  TEST_CASE("tracked eigenvalues agree with direct solves and phases are continuous") {
    const ChainSpec chain{5, 1.0, 0, 4};
    const PulseSchedule s = PulseSchedule::symmetric(150.0);
    std::vector<CMat> seq;
    for (int i = 0; i <= 300; ++i) seq.push_back(chain_hamiltonian(chain, s, s.start + (s.end - s.start) * i / 300.0));
    const TrackedSpectrum t = eig_tracked(seq);
    for (std::size_t i = 0; i < seq.size(); i += 37) {
      RVec vals;
      CMat vecs;
      sorted_eigensystem(seq[i], vals, vecs);
      RVec tracked = t.energies[i];
      std::sort(tracked.data(), tracked.data() + tracked.size());
      CHECK((tracked - vals).cwiseAbs().maxCoeff() < 1e-10);
    }
    for (std::size_t i = 1; i < seq.size(); ++i)
      for (int b = 0; b < 5; ++b) {
        const cplx o = t.vectors[i - 1].col(b).dot(t.vectors[i].col(b));
        CHECK(std::abs(o.imag()) < 1e-12);
        CHECK(o.real() > 0.0);
      }
  }

  TEST_CASE("fluctuator block shows a tiny anti-crossing before step two") {
    const double chi = 0.15;
    const ChainSpec chain{5, 1.0, 0, 4};
    const PulseSchedule s = PulseSchedule::symmetric(150.0);
    const std::vector<double> diag{-chi, chi, chi, chi, chi};
    const HamiltonianFn h = [&](double t) { return chain_hamiltonian(chain, s, t, diag); };
    std::vector<double> times;
    for (int i = 0; i <= 4000; ++i) times.push_back(s.start + (s.end - s.start) * i / 4000.0);
    const auto mins = gap_minima(h, times);
    REQUIRE_FALSE(mins.empty());
    CHECK(mins.front().gap > 0.0001);
    CHECK(mins.front().gap < 0.0004);
    CHECK(mins.front().time < s.step_two_start());
  }

  TEST_CASE("non-Hermitian input is rejected") {
    CMat h(2, 2);
    h << 0, 1, 0, 0;
    const std::vector<CMat> seq{h, h};
    CHECK_THROWS_AS(eig_tracked(seq), ConfigError);
  }
}
