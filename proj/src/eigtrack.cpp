#include "qmeas/eigtrack.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/tools/minima.hpp>

namespace qmeas {

std::vector<double> TrackedSpectrum::curve(int branch) const {
  std::vector<double> c(energies.size());
  for (std::size_t i = 0; i < energies.size(); ++i) c[i] = energies[i](branch);
  return c;
}

void sorted_eigensystem(const CMat& h, RVec& values, CMat& vectors) {
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  if (es.info() != Eigen::Success) throw NumericError("Hermitian eigensolver failed");
  values = es.eigenvalues();
  vectors = es.eigenvectors();
  for (int k = 0; k < vectors.cols(); ++k) {
    Eigen::Index imax = 0;
    vectors.col(k).cwiseAbs().maxCoeff(&imax);
    const cplx c = vectors(imax, k);
    vectors.col(k) *= std::conj(c) / std::abs(c);
  }
}

TrackedSpectrum eig_tracked(std::span<const CMat> sequence, double gap_threshold) {
  TrackedSpectrum out;
  if (sequence.empty()) return out;
  const int n = static_cast<int>(sequence.front().rows());
  for (const auto& h : sequence) {
    if (h.rows() != n || h.cols() != n) throw ConfigError("eig_tracked: inconsistent matrix dimensions");
    if (!is_hermitian(h, 1e-10)) throw ConfigError("eig_tracked: matrix not Hermitian");
  }

  RVec vals;
  CMat vecs;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    sorted_eigensystem(sequence[i], vals, vecs);
    for (int k = 0; k + 1 < n; ++k)
      if (vals(k + 1) - vals(k) < 1e-12) {
        out.warnings.push_back("degenerate spectrum at sample " + std::to_string(i) + ", levels " +
                               std::to_string(k) + "," + std::to_string(k + 1) + "; tracking by overlap");
        break;
      }
    if (i == 0) {
      out.energies.push_back(vals);
      out.vectors.push_back(vecs);
      continue;
    }
    const CMat& prev = out.vectors.back();
    const RMat ov = (prev.adjoint() * vecs).cwiseAbs();
    // Greedy assignment by descending overlap.
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(n * n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) pairs.emplace_back(a, b);
    std::sort(pairs.begin(), pairs.end(),
              [&](auto l, auto r) { return ov(l.first, l.second) > ov(r.first, r.second); });
    std::vector<int> match(n, -1);
    std::vector<bool> used(n, false);
    int assigned = 0;
    for (auto [a, b] : pairs) {
      if (match[a] >= 0 || used[b]) continue;
      match[a] = b;
      used[b] = true;
      if (++assigned == n) break;
    }
    RVec e(n);
    CMat v(n, n);
    for (int a = 0; a < n; ++a) {
      e(a) = vals(match[a]);
      v.col(a) = vecs.col(match[a]);
      const cplx o = prev.col(a).dot(v.col(a));
      if (std::abs(o) > 0.0) v.col(a) *= std::conj(o) / std::abs(o);
    }
    out.energies.push_back(std::move(e));
    out.vectors.push_back(std::move(v));
  }

  // Local minima of each tracked pair gap below the threshold.
  const std::size_t m = out.energies.size();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      auto gap = [&](std::size_t i) { return std::abs(out.energies[i](a) - out.energies[i](b)); };
      for (std::size_t i = 1; i + 1 < m; ++i) {
        const double g = gap(i);
        if (g < gap_threshold && g <= gap(i - 1) && g < gap(i + 1)) out.anticrossings.push_back({i, a, b, g});
      }
    }
  std::sort(out.anticrossings.begin(), out.anticrossings.end(),
            [](const AntiCrossing& l, const AntiCrossing& r) { return l.sample < r.sample; });
  return out;
}

std::vector<GapMinimum> gap_minima(const HamiltonianFn& h, std::span<const double> times) {
  std::vector<GapMinimum> out;
  if (times.size() < 3) return out;
  const int n = static_cast<int>(h(times.front()).rows());
  std::vector<RVec> spec(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    Eigen::SelfAdjointEigenSolver<CMat> es(h(times[i]), Eigen::EigenvaluesOnly);
    spec[i] = es.eigenvalues();
  }
  for (int k = 0; k + 1 < n; ++k) {
    auto gap_at = [&](double t) {
      Eigen::SelfAdjointEigenSolver<CMat> es(h(t), Eigen::EigenvaluesOnly);
      return es.eigenvalues()(k + 1) - es.eigenvalues()(k);
    };
    for (std::size_t i = 1; i + 1 < times.size(); ++i) {
      const double g = spec[i](k + 1) - spec[i](k);
      const double gl = spec[i - 1](k + 1) - spec[i - 1](k);
      const double gr = spec[i + 1](k + 1) - spec[i + 1](k);
      if (!(g <= gl && g < gr)) continue;
      auto r = boost::math::tools::brent_find_minima(gap_at, times[i - 1], times[i + 1], 52);
      out.push_back({r.first, k, r.second});
    }
  }
  std::sort(out.begin(), out.end(), [](const GapMinimum& l, const GapMinimum& r) { return l.gap < r.gap; });
  return out;
}

}  // namespace qmeas
