#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace gfb {

// Deterministic random stream. Draws are produced from the raw engine output,
// so values depend only on the seed and not on the standard library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // standard normal (Box-Muller, spare cached)
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  // Seed derivation for independent substreams (splitmix64 finalizer chain).
  static std::uint64_t mix(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (std::uint64_t p : parts) {
      h += p + 0x9e3779b97f4a7c15ull;
      h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
      h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
      h ^= h >> 31;
    }
    return h;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline Eigen::VectorXd uniform_vector(Rng& rng, int d, double a, double b) {
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v[i] = rng.uniform(a, b);
  return v;
}

inline Eigen::VectorXd gaussian_vector(Rng& rng, int d) {
  Eigen::VectorXd v(d);
  for (int i = 0; i < d; ++i) v[i] = rng.gaussian();
  return v;
}

inline Eigen::VectorXd random_unit_vector(Rng& rng, int d) {
  Eigen::VectorXd v = gaussian_vector(rng, d);
  double nrm = v.norm();
  while (nrm < 1e-12) {
    v = gaussian_vector(rng, d);
    nrm = v.norm();
  }
  return v / nrm;
}

}  // namespace gfb
