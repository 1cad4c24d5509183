#include "qmeas/tls.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "qmeas/eigtrack.hpp"
#include "qmeas/parallel.hpp"

namespace qmeas {

void TlsBath::validate(int window) const {
  if (static_cast<int>(couplings.size()) != window || static_cast<int>(inversions.size()) != window)
    throw ConfigError("TLS bath needs one coupling and one inversion per window site (" + std::to_string(window) +
                      ")");
  for (double w : inversions)
    if (!(w >= -1.0 && w <= 1.0)) throw ConfigError("TLS inversion must lie in [-1, 1]");
  for (double c : couplings)
    if (!std::isfinite(c)) throw ConfigError("TLS coupling must be finite");
}

TlsBath TlsBath::uniform(int window, double chi, double inversion) {
  return {std::vector<double>(static_cast<std::size_t>(window), chi),
          std::vector<double>(static_cast<std::size_t>(window), inversion)};
}

std::vector<SignBlock> sign_blocks(const TlsBath& bath) {
  const int n = static_cast<int>(bath.couplings.size());
  if (n > 20) throw ConfigError("too many TLS sites for block enumeration");
  std::vector<SignBlock> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    SignBlock b;
    b.weight = 1.0;
    b.signs.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const int s = (mask >> i) & 1u ? 1 : -1;
      b.signs[static_cast<std::size_t>(i)] = s;
      b.weight *= 0.5 * (1.0 + s * bath.inversions[static_cast<std::size_t>(i)]);
    }
    if (b.weight > 0.0) out.push_back(std::move(b));
  }
  return out;
}

std::vector<double> block_diagonal(const ChainSpec& chain, const TlsBath& bath, const SignBlock& block) {
  std::vector<double> d(static_cast<std::size_t>(chain.dots), 0.0);
  for (int i = 0; i < chain.window(); ++i)
    d[static_cast<std::size_t>(chain.from + i)] =
        block.signs[static_cast<std::size_t>(i)] * bath.couplings[static_cast<std::size_t>(i)];
  return d;
}

cplx reduced_coherence(const QpcArray* array, const TlsBath& bath, double t, int k, int l) {
  const int n = static_cast<int>(bath.couplings.size());
  if (k < 0 || l < 0 || k >= n || l >= n) throw ConfigError("reduced_coherence: site outside the bath");
  if (k == l) return 1.0;
  const double dec = array ? std::exp(-dephasing_rate(*array, k, l) * t) : 1.0;
  auto factor = [&](int i, double sign) {
    const double c = bath.couplings[static_cast<std::size_t>(i)];
    const double w = bath.inversions[static_cast<std::size_t>(i)];
    return cplx(std::cos(c * t), sign * w * std::sin(c * t));
  };
  return dec * factor(k, -1.0) * factor(l, 1.0);
}

GammaDelta gamma_delta(double t, double chi, double inversion) {
  const cplx den(std::cos(chi * t), inversion * std::sin(chi * t));
  GammaDelta r;
  if (std::abs(den) < 1e-12) {
    r.pole = true;
    r.gamma = std::numeric_limits<double>::infinity();
    return r;
  }
  const cplx v = chi * cplx(std::sin(chi * t), -inversion * std::cos(chi * t)) / den;
  r.gamma = v.real();
  r.delta = -v.imag();
  return r;
}

TlsTransportResult transport_with_tls(const ChainSpec& chain, const PulseSchedule& schedule, const TlsBath& bath,
                                      const StateVector& initial, const TlsTransportOptions& opt) {
  chain.validate();
  schedule.validate();
  bath.validate(chain.window());
  if (chain.window() > 12) throw ConfigError("TLS block enumeration limited to 12 window sites");
  TlsTransportResult res;
  res.blocks = sign_blocks(bath);

  const int every = std::max(1, opt.record_every);
  const double steps = std::ceil((schedule.end - schedule.start) / opt.dt);
  const double records = steps / every + 2.0;
  const double dim = chain.dots;
  const double bytes = 16.0 * (static_cast<double>(res.blocks.size()) * records * dim + records * dim * dim);
  if (bytes > opt.memory_budget_bytes)
    throw ConfigError("transport_with_tls needs about " + std::to_string(bytes / 1e6) + " MB, budget is " +
                      std::to_string(opt.memory_budget_bytes / 1e6) + " MB");

  std::vector<TransportResult> runs(res.blocks.size());
  parallel_for(res.blocks.size(), [&](std::size_t b) {
    TransportOptions topt;
    topt.dt = opt.dt;
    topt.record_every = every;
    topt.diagonal = block_diagonal(chain, bath, res.blocks[b]);
    topt.target = opt.target;
    TransportResult r = run_transport(chain, schedule, initial, topt);
    r.zero_branch.clear();
    runs[b] = std::move(r);
  });

  res.times = runs.front().trajectory.times;
  const std::size_t nt = res.times.size();
  res.reduced.assign(nt, CMat::Zero(chain.dots, chain.dots));
  for (std::size_t b = 0; b < runs.size(); ++b) {
    const double w = res.blocks[b].weight;
    for (std::size_t i = 0; i < nt; ++i) {
      const CVec& a = runs[b].trajectory.states[i].amplitudes();
      res.reduced[i] += w * (a * a.adjoint());
    }
    res.block_fidelity.push_back(runs[b].fidelity);
    res.block_phase.push_back(runs[b].dynamical_phase);
    res.fidelity += w * runs[b].fidelity;
  }
  if (opt.target) {
    const CVec& t = opt.target->amplitudes();
    res.coherent_fidelity = (t.adjoint() * res.reduced.back() * t)(0, 0).real();
  }
  res.purity.reserve(nt);
  for (const auto& r : res.reduced) res.purity.push_back(r.cwiseAbs2().sum());
  return res;
}

double fast_oscillation_amplitude(const std::vector<double>& times, const std::vector<CMat>& reduced, double window) {
  const std::size_t n = times.size();
  if (n < 3 || reduced.size() != n) return 0.0;
  const double dt = (times.back() - times.front()) / static_cast<double>(n - 1);
  const std::size_t half = static_cast<std::size_t>(std::max(1.0, std::round(0.5 * window / dt)));
  if (2 * half + 1 > n) return 0.0;
  const int dim = static_cast<int>(reduced.front().rows());
  double worst = 0.0;
  for (int k = 0; k < dim; ++k) {
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + reduced[i](k, k).real();
    for (std::size_t i = half; i + half < n; ++i) {
      const double mean = (prefix[i + half + 1] - prefix[i - half]) / static_cast<double>(2 * half + 1);
      worst = std::max(worst, std::abs(reduced[i](k, k).real() - mean));
    }
  }
  return worst;
}

std::vector<PulsePair> step_two_samples(const PulseSchedule& schedule, int count, double threshold) {
  if (count < 1) throw ConfigError("need at least one step-two sample");
  const double t0 = schedule.step_two_start(threshold);
  const double t1 = schedule.step_two_end(threshold);
  std::vector<PulsePair> out;
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? t0 : t0 + (t1 - t0) * i / (count - 1);
    out.push_back({schedule.pump(t), schedule.stokes(t)});
  }
  return out;
}

CrossingReport crossing_condition(const ChainSpec& chain, const TlsBath& bath, std::span<const PulsePair> samples) {
  chain.validate();
  bath.validate(chain.window());
  CrossingReport rep;
  if (samples.empty()) return rep;
  rep.margin = std::numeric_limits<double>::infinity();
  const auto blocks = sign_blocks(bath);
  const int win = chain.window();
  const int centre = (win - 1) / 2;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto diag = block_diagonal(chain, bath, blocks[b]);
    CVec cur;
    for (std::size_t s = 0; s < samples.size(); ++s) {
      const CMat h = chain_hamiltonian(chain, samples[s].pump, samples[s].stokes, diag)
                         .block(chain.from, chain.from, win, win);
      RVec vals;
      CMat vecs;
      sorted_eigensystem(h, vals, vecs);
      const CVec ref = s == 0 ? dark_state(samples[s].pump, samples[s].stokes, chain.omega_max, win).amplitudes()
                              : cur;
      Eigen::Index k = 0;
      (vecs.adjoint() * ref).cwiseAbs().maxCoeff(&k);
      cur = vecs.col(k);
      const double m = k == centre ? std::min(vals(k) - vals(k - 1), vals(k + 1) - vals(k))
                                   : -std::abs(vals(k) - vals(centre));
      if (m < rep.margin) {
        rep.margin = m;
        rep.worst_block = static_cast<int>(b);
        rep.worst_sample = static_cast<int>(s);
      }
      if (k != centre) rep.satisfied = false;
    }
  }
  return rep;
}

}  // namespace qmeas
