#include "qmeas/classical.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <Eigen/Dense>

#include "qmeas/linalg.hpp"
#include "qmeas/parallel.hpp"

namespace qmeas {

void GasModel::validate() const {
  if (!(n_g >= 0.0)) throw ConfigError("gas density n_g must be non-negative");
  if (!(T > 0.0)) throw ConfigError("temperature T must be positive");
  if (!(m_g > 0.0)) throw ConfigError("gas mass m_g must be positive");
  if (!(W_g > 0.0)) throw ConfigError("gas packet width W_g must be positive");
  if (!(delta > 0.0)) throw ConfigError("coarse-grain time delta must be positive");
}

double GasModel::thermal_velocity() const { return std::sqrt(T / m_g); }

CollisionOutcome collide(double p, double p_g, double m, double m_g) {
  const double M = m + m_g;
  return {((m - m_g) * p + 2.0 * m * p_g) / M, ((m_g - m) * p_g + 2.0 * m_g * p) / M};
}

double momentum_transfer(double p, double p_g, double m, double m_g) {
  return 2.0 * (m * p_g - m_g * p) / (m + m_g);
}

double collision_density(const GasModel& gas, double m, double p, double p_g) {
  const double s2 = gas.m_g * gas.T;
  return gas.n_g / std::sqrt(2.0 * pi * s2) * std::exp(-p_g * p_g / (2.0 * s2)) * std::abs(p_g / gas.m_g - p / m);
}

double kick_density(const GasModel& gas, double m, double p, double q) {
  const double M = m + gas.m_g;
  const double u = q * M + 2.0 * gas.m_g * p;
  return gas.n_g / std::sqrt(2.0 * pi * gas.m_g * gas.T) * M * M / (4.0 * m * m * gas.m_g) * std::abs(q) *
         std::exp(-u * u / (8.0 * m * m * gas.m_g * gas.T));
}

namespace {

// Absolute moments of w = v_g - v with v_g ~ N(0, sigma^2).
struct RelativeVelocityMoments {
  double abs1;  // E|w|
  double sgn2;  // E[w|w|]
  double abs3;  // E|w|^3
};

RelativeVelocityMoments relative_moments(const GasModel& gas, double m, double p) {
  const double s = gas.thermal_velocity();
  const double mu = -p / m;
  const double z = mu / s;
  const double g = s * std::sqrt(2.0 / pi) * std::exp(-0.5 * z * z);
  const double e = std::erf(z / std::sqrt(2.0));
  return {g + mu * e, (mu * mu + s * s) * e + mu * g, g * (mu * mu + 2.0 * s * s) +mu * (mu * mu + 3.0 * s * s) * e};
}

}  // namespace

double total_rate(const GasModel& gas, double m, double p) { return gas.n_g * relative_moments(gas, m, p).abs1; }

double total_rate_slow(const GasModel& gas, double m, double p) {
  const double v = p / m;
  return gas.n_g * std::sqrt(2.0 * gas.T / (pi * gas.m_g)) * (1.0 + gas.m_g * v * v / (2.0 * gas.T));
}

double mean_kick(const GasModel& gas, double m, double p) {
  const double a = gas.alpha(m);
  return gas.n_g * 2.0 * gas.m_g / (1.0 + a) * relative_moments(gas, m, p).sgn2;
}

double kick_second_moment(const GasModel& gas, double m, double p) {
  const double a = gas.alpha(m);
  const double c = 2.0 * gas.m_g / (1.0 + a);
  return gas.n_g * c * c * relative_moments(gas, m, p).abs3;
}

Kramers kramers(const GasModel& gas, double m) {
  gas.validate();
  const double g = 4.0 * gas.n_g * std::sqrt(2.0 * gas.m_g * gas.T) / (std::sqrt(pi) * m);
  return {g, m * gas.T * g};
}

namespace {

// Draws the gas velocity of the next collision for a particle of velocity v.
double sample_gas_velocity(const GasModel& gas, double v, Rng& rng, long& rejections) {
  const double s = gas.thermal_velocity();
  const double flux = s * std::sqrt(2.0 / pi);  // E|v_g|
  std::normal_distribution<double> normal(0.0, s);
  // Envelope mu(v_g)(|v_g| + |v|) dominates mu(v_g)|v_g - v|; mixture of a Gaussian and a Rayleigh draw.
  for (int attempt = 0; attempt < 100000; ++attempt) {
    double vg;
    if (uniform_open(rng) * (flux + std::abs(v)) < std::abs(v)) {
      vg = normal(rng);
    } else {
      vg = s * std::sqrt(-2.0 * std::log(uniform_open(rng)));
      if (uniform_open(rng) < 0.5) vg = -vg;
    }
    const double accept = std::abs(vg - v) / (std::abs(vg) + std::abs(v));
    if (accept > 1.0 + 1e-12) throw NumericError("rejection envelope violated");
    if (uniform_open(rng) < accept) return vg;
    ++rejections;
  }
  throw NumericError("rejection sampler failed to accept");
}

}  // namespace

JumpTrajectory simulate_jumps(const GasModel& gas, const ClassicalParticle& start, std::span<const double> record_times,
                              Rng& rng, CollisionStatistics stats) {
  gas.validate();
  if (!(start.m > 0.0)) throw ConfigError("particle mass must be positive");
  if (!std::is_sorted(record_times.begin(), record_times.end()))
    throw ConfigError("record times must be sorted");
  JumpTrajectory tr;
  tr.times.assign(record_times.begin(), record_times.end());
  tr.x.reserve(record_times.size());
  tr.p.reserve(record_times.size());
  double t = 0.0, x = start.x, p = start.p;
  const double rate0 = total_rate(gas, start.m, 0.0);
  std::normal_distribution<double> maxwell(0.0, std::sqrt(gas.m_g * gas.T));
  std::size_t next = 0;
  while (next < record_times.size()) {
    const double rate = stats == CollisionStatistics::flux_weighted ? total_rate(gas, start.m, p) : rate0;
    const double wait = rate > 0.0 ? -std::log(uniform_open(rng)) / rate : INFINITY;
    while (next < record_times.size() && record_times[next] <= t + wait) {
      tr.x.push_back(x + p / start.m * (record_times[next] - t));
      tr.p.push_back(p);
      ++next;
    }
    if (next == record_times.size()) break;
    x += p / start.m * wait;
    t += wait;
    const double pg = stats == CollisionStatistics::flux_weighted
                          ? gas.m_g * sample_gas_velocity(gas, p / start.m, rng, tr.rejections)
                          : maxwell(rng);
    p = collide(p, pg, start.m, gas.m_g).p;
    ++tr.collisions;
  }
  return tr;
}

EnsembleMoments ensemble_moments(const GasModel& gas, const ClassicalParticle& start, std::span<const double> times,
                                 const EnsembleOptions& opt) {
  if (opt.trajectories < 2) throw ConfigError("need at least two trajectories");
  if (opt.chunk < 1) throw ConfigError("chunk size must be positive");
  const std::size_t nt = times.size();
  const long chunks = (opt.trajectories + opt.chunk - 1) / opt.chunk;
  // Per chunk: sums of the five moment samples and their squares at every time.
  struct Partial {
    std::vector<double> sum, sq;
    long collisions = 0;
    std::vector<double> final_p;
  };
  std::vector<Partial> parts(static_cast<std::size_t>(chunks));
  parallel_for(static_cast<std::size_t>(chunks), [&](std::size_t c) {
    Rng rng = task_stream(opt.seed, c);
    Partial& part = parts[c];
    part.sum.assign(5 * nt, 0.0);
    part.sq.assign(5 * nt, 0.0);
    const long first = static_cast<long>(c) * opt.chunk;
    const long last = std::min(opt.trajectories, first + opt.chunk);
    for (long k = first; k < last; ++k) {
      const JumpTrajectory tr = simulate_jumps(gas, start, times, rng, opt.stats);
      part.collisions += tr.collisions;
      for (std::size_t i = 0; i < nt; ++i) {
        const double x = tr.x[i], p = tr.p[i];
        const double s[5] = {x, p, x * x, p * p, x * p};
        for (int j = 0; j < 5; ++j) {
          part.sum[5 * i + j] += s[j];
          part.sq[5 * i + j] += s[j] * s[j];
        }
      }
      if (opt.keep_final_momenta && nt > 0) part.final_p.push_back(tr.p.back());
    }
  });

  EnsembleMoments out;
  out.times.assign(times.begin(), times.end());
  out.trajectories = opt.trajectories;
  std::vector<double> sum(5 * nt, 0.0), sq(5 * nt, 0.0);
  for (const auto& part : parts) {
    for (std::size_t i = 0; i < 5 * nt; ++i) {
      sum[i] += part.sum[i];
      sq[i] += part.sq[i];
    }
    out.collisions += part.collisions;
    out.final_momenta.insert(out.final_momenta.end(), part.final_p.begin(), part.final_p.end());
  }
  const double n = static_cast<double>(opt.trajectories);
  for (std::size_t i = 0; i < nt; ++i) {
    double mean[5], se[5];
    for (int j = 0; j < 5; ++j) {
      mean[j] = sum[5 * i + j] / n;
      const double var = std::max(0.0, (sq[5 * i + j] / n - mean[j] * mean[j]) * n / (n - 1.0));
      se[j] = std::sqrt(var / n);
    }
    out.mean.push_back({mean[0], mean[1], mean[2], mean[3], mean[4]});
    out.std_error.push_back({se[0], se[1], se[2], se[3], se[4]});
  }
  return out;
}

CollisionTerms classical_terms(const GasModel& gas, double m, Closure closure) {
  gas.validate();
  const double a = gas.alpha(m);
  const double mg = gas.m_g, T = gas.T;
  CollisionTerms t;
  t.position_square = [](double) { return 0.0; };
  switch (closure) {
    case Closure::linear: {
      const Kramers k = kramers(gas, m);
      t.kick = [k](double p) { return -k.gamma * p; };
      t.momentum_square = [k](double p) { return 2.0 * k.diffusion - 2.0 * k.gamma * p * p; };
      break;
    }
    case Closure::slow_series: {
      const double f = gas.n_g / (1.0 + a) * std::sqrt(2.0 * mg * T / pi);
      t.kick = [=](double p) {
        const double v = p / m;
        return -f * (4.0 * v + 2.0 * mg / (3.0 * T) * v * v * v - mg * mg / (30.0 * T * T) * v * v * v * v * v);
      };
      const double h = 8.0 * gas.n_g / ((1.0 + a) * (1.0 + a) * mg * std::sqrt(2.0 * pi * mg * T));
      t.momentum_square = [=](double p) {
        const double p2 = p * p;
        return h * (2.0 * mg * T * mg * T - a * (2.0 - a) * mg * T * p2 - a * a * a * (4.0 + a) / 12.0 * p2 * p2);
      };
      break;
    }
    case Closure::exact: {
      t.kick = [gas, m](double p) { return mean_kick(gas, m, p); };
      t.momentum_square = [gas, m](double p) {
        return 2.0 * p * mean_kick(gas, m, p) + kick_second_moment(gas, m, p);
      };
      break;
    }
  }
  return t;
}

namespace {

// Probabilists' Gauss-Hermite rule (weight exp(-z^2/2)/sqrt(2 pi)) by Golub-Welsch.
struct HermiteRule {
  std::vector<double> nodes, weights;
};

const HermiteRule& hermite_rule(int n) {
  thread_local std::vector<std::pair<int, HermiteRule>> cache;
  for (const auto& [k, r] : cache)
    if (k == n) return r;
  RMat J = RMat::Zero(n, n);
  for (int i = 1; i < n; ++i) J(i, i - 1) = J(i - 1, i) = std::sqrt(static_cast<double>(i));
  Eigen::SelfAdjointEigenSolver<RMat> es(J);
  HermiteRule r;
  for (int i = 0; i < n; ++i) {
    r.nodes.push_back(es.eigenvalues()(i));
    const double v = es.eigenvectors()(0, i);
    r.weights.push_back(v * v);
  }
  cache.emplace_back(n, std::move(r));
  return cache.back().second;
}

}  // namespace

MomentVector moment_rhs(const CollisionTerms& terms, double m, const MomentVector& s, int nodes) {
  const HermiteRule& rule = hermite_rule(nodes);
  const double var_p = std::max(0.0, s.pp - s.p * s.p);
  const double sd = std::sqrt(var_p);
  const double cov_xp = s.xp - s.x * s.p;
  // Stein: E[x F(p)] = <x> E[F] + Cov(x,p) E[F'] for jointly Gaussian (x, p).
  const double scale = std::max({std::abs(s.p), sd, 1e-300});
  const double h = 1e-5 * scale;
  double eK = 0.0, eK1 = 0.0, eS = 0.0, eX = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double p = s.p + sd * rule.nodes[i];
    const double w = rule.weights[i];
    eK += w * terms.kick(p);
    eK1 += w * (terms.kick(p + h) - terms.kick(p - h)) / (2.0 * h);
    eS += w * terms.momentum_square(p);
    eX += w * terms.position_square(p);
  }
  MomentVector d;
  d.x = s.p / m;
  d.p = eK;
  d.xx = 2.0 * s.xp / m + eX;
  d.pp = eS;
  d.xp = s.pp / m + s.x * eK + cov_xp * eK1;
  return d;
}

MomentSeries integrate_moments(const CollisionTerms& terms, double m, const MomentVector& start,
                               std::span<const double> times, double dt) {
  if (!(dt > 0.0)) throw ConfigError("moment integration step must be positive");
  if (!std::is_sorted(times.begin(), times.end())) throw ConfigError("output times must be sorted");
  auto axpy = [](const MomentVector& a, double c, const MomentVector& b) {
    return MomentVector{a.x + c * b.x, a.p + c * b.p, a.xx + c * b.xx, a.pp + c * b.pp, a.xp + c * b.xp};
  };
  MomentSeries out;
  MomentVector s = start;
  double t = 0.0;
  for (double target : times) {
    if (target < t) throw ConfigError("output times must be non-negative");
    const long steps = static_cast<long>(std::ceil((target - t) / dt - 1e-12));
    const double h = steps > 0 ? (target - t) / static_cast<double>(steps) : 0.0;
    for (long k = 0; k < steps; ++k) {
      const MomentVector k1 = moment_rhs(terms, m, s);
      const MomentVector k2 = moment_rhs(terms, m, axpy(s, 0.5 * h, k1));
      const MomentVector k3 = moment_rhs(terms, m, axpy(s, 0.5 * h, k2));
      const MomentVector k4 = moment_rhs(terms, m, axpy(s, h, k3));
      s = axpy(s, h / 6.0, k1);
      s = axpy(s, h / 3.0, k2);
      s = axpy(s, h / 3.0, k3);
      s = axpy(s, h / 6.0, k4);
    }
    t = target;
    if (!std::isfinite(s.xx) || !std::isfinite(s.pp)) throw NumericError("moment integration diverged");
    out.times.push_back(t);
    out.moments.push_back(s);
  }
  return out;
}

PartialGaussians partial_gaussian_series(const GasModel& gas, double m, double p) {
  const double a = gas.alpha(m), T = gas.T;
  const double p2 = p * p, p3 = p2 * p, p4 = p2 * p2, p5 = p4 * p;
  PartialGaussians s;
  s.pg0 = a * p - a * a * p3 / (6.0 * m * T) + a * a * a * p5 / (40.0 * m * T * m * T);
  s.pg1 = -T + a * p2 / (2.0 * m) - a * a * p4 / (8.0 * m * m * T);
  s.pg2 = a * p3 / (3.0 * m * m) - a * a * p5 / (10.0 * m * m * m * T);
  s.pg3 = -2.0 * T * T / (a * m) + a * p4 / (4.0 * m * m * m);
  return s;
}

PartialGaussians partial_gaussian_quadrature(const GasModel& gas, double m, double p) {
  using boost::math::quadrature::gauss_kronrod;
  const double mg = gas.m_g, T = gas.T;
  const double top = gas.alpha(m) * p;
  const double lo = top - 40.0 * std::sqrt(mg * T);
  auto g = [&](double pg) { return std::exp(-pg * pg / (2.0 * mg * T)); };
  PartialGaussians s;
  s.pg0 = gauss_kronrod<double, 61>::integrate(g, 0.0, top, 15, 1e-14);
  s.pg1 = gauss_kronrod<double, 61>::integrate([&](double pg) { return pg / mg * g(pg); }, lo, top, 15, 1e-14);
  s.pg2 = gauss_kronrod<double, 61>::integrate([&](double pg) { return pg * pg / (mg * mg) * g(pg); }, 0.0, top, 15,
                                               1e-14);
  s.pg3 = gauss_kronrod<double, 61>::integrate([&](double pg) { return std::pow(pg / mg, 3) * g(pg); }, lo, top, 15,
                                               1e-14);
  return s;
}

}  // namespace qmeas
