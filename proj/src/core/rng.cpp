#include "kickoff/core/rng.hpp"

#include <cmath>
#include <numbers>

namespace kickoff {

std::size_t RngStream::index(std::size_t n) {
  // Lemire-style multiply-shift keeps the mapping platform independent.
  const auto r = static_cast<unsigned __int128>(next_u64()) * n;
  return static_cast<std::size_t>(r >> 64);
}

double RngStream::normal(double mean, double stddev) {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return mean + stddev * z;
}

}  // namespace kickoff
