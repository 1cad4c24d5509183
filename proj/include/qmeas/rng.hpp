#pragma once

#include <cstdint>
#include <random>

namespace qmeas {

using Rng = std::mt19937_64;

// Independent stream for task `task` under a run seed; the same (seed, task) pair always gives the
// same sequence regardless of which worker runs it.
inline Rng task_stream(std::uint64_t seed, std::uint64_t task) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(task), static_cast<std::uint32_t>(task >> 32), 0x51ed2701u};
  return Rng(seq);
}

// Uniform on the open interval (0, 1).
inline double uniform_open(Rng& rng) {
  double u;
  do u = std::generate_canonical<double, 53>(rng);
  while (u <= 0.0);
  return u;
}

}  // namespace qmeas
