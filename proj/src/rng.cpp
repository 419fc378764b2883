#include "equizero/rng.hpp"

#include <cmath>
#include <numbers>

namespace equizero {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = std::uint64_t(a) * b;
  hi = std::uint32_t(p >> 32);
  lo = std::uint32_t(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::uint64_t key, std::uint64_t counter_hi,
                                        std::uint64_t counter_lo) {
  std::uint32_t k0 = std::uint32_t(key), k1 = std::uint32_t(key >> 32);
  std::array<std::uint32_t, 4> c = {std::uint32_t(counter_lo), std::uint32_t(counter_lo >> 32),
                                    std::uint32_t(counter_hi), std::uint32_t(counter_hi >> 32)};
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, c[0], hi0, lo0);
    mulhilo(kPhiloxM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  return c;
}

cplx GaussianStream::complex_gaussian(std::uint64_t trial, std::uint64_t index) const {
  const auto r = philox4x32(seed, trial, index);
  const double u1 = (double(r[0]) + 0.5) * 0x1p-32;
  const double u2 = (double(r[1]) + 0.5) * 0x1p-32;
  // modulus^2 ~ Exp(1), phase uniform: standard complex normal
  const double rad = std::sqrt(-std::log(u1));
  return std::polar(rad, 2.0 * std::numbers::pi * u2);
}

double GaussianStream::uniform(std::uint64_t trial, std::uint64_t index) const {
  const auto r = philox4x32(seed ^ 0xA5A5A5A5A5A5A5A5ULL, trial, index);
  return (double(r[0]) + double(r[1]) * 0x1p-32) * 0x1p-32;
}

}  // namespace equizero
