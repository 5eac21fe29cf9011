#include "seditor/math/rng.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "seditor/util/error.hpp"

namespace seditor::math {

double Rng::normal() {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t Rng::uniform_index(std::size_t n) {
  if (n == 0) throw Error("uniform_index: n must be positive");
  // Rejection sampling to avoid modulo bias.
  const std::uint64_t span = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return static_cast<std::size_t>(x % span);
}

std::string Rng::save() const {
  std::ostringstream out;
  out << engine_;
  return out.str();
}

void Rng::load(const std::string& text) {
  std::istringstream in(text);
  in >> engine_;
  if (in.fail()) throw Error("Rng::load: malformed state string");
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream,
                          std::uint64_t index) {
  // splitmix64 finalizer over a mixed word; passes through distinct
  // (root, stream, index) triples without collisions in practice.
  std::uint64_t x = root;
  x ^= stream * 0x9e3779b97f4a7c15ULL + 0x7f4a7c15ULL;
  x ^= index * 0xbf58476d1ce4e5b9ULL + 0x1ce4e5b9ULL;
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace seditor::math
