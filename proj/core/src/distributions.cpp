#include "stochsched/distributions.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace stochsched {

double tri_cdf(const TriangularDist& d, double zeta) {
  if (zeta < d.min) return 0.0;
  if (zeta >= d.max) return 1.0;
  const double width = d.max - d.min;
  if (zeta <= d.mode) {
    return (zeta - d.min) * (zeta - d.min) / (width * (d.mode - d.min));
  }
  return 1.0 - (d.max - zeta) * (d.max - zeta) / (width * (d.max - d.mode));
}

double tri_shortfall(const TriangularDist& d, double zeta) {
  const double a = d.min, m = d.mode, b = d.max;
  if (zeta >= b) return 0.0;
  if (zeta <= a) return d.mean() - zeta;
  const double width = b - a;
  if (zeta >= m) {
    // integral of (b - t)^2 / (width (b - m)) over [zeta, b]
    const double r = b - zeta;
    return r * r * r / (3.0 * width * (b - m));
  }
  // a < zeta < m: phi(m) plus the integral of 1 - H over [zeta, m], written
  // with nonnegative terms only.
  const double lo = m - a;
  const double gap = m - zeta;
  const double phi_mode = (b - m) * (b - m) / (3.0 * width);
  const double bracket = gap * (2.0 * lo + (zeta - a)) + 3.0 * lo * (b - m);
  return phi_mode + gap * bracket / (3.0 * width * lo);
}

double tri_quantile(const TriangularDist& d, double prob) {
  if (d.is_degenerate()) return d.min;
  const double width = d.max - d.min;
  const double split = (d.mode - d.min) / width;
  if (prob < split) return d.min + std::sqrt(prob * width * (d.mode - d.min));
  return d.max - std::sqrt((1.0 - prob) * width * (d.max - d.mode));
}

double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double standard_normal(Rng& rng) {
  for (;;) {
    const double u = 2.0 * uniform01(rng) - 1.0;
    const double v = 2.0 * uniform01(rng) - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

int uniform_int(Rng& rng, int lo, int hi) {
  if (hi < lo) throw std::invalid_argument("uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return lo + static_cast<int>(draw % span);
}

double sample(const TriangularDist& d, Rng& rng) {
  if (d.is_degenerate()) return d.min;
  return tri_quantile(d, uniform01(rng));
}

double sample(const TruncatedNormal& d, Rng& rng) {
  if (!d.valid()) throw std::invalid_argument("truncated normal: invalid parameters");
  for (int attempt = 0; attempt < 1'000'000; ++attempt) {
    const double x = d.mean + d.stdev * standard_normal(rng);
    if (x >= d.lower && x <= d.upper) return x;
  }
  throw std::runtime_error("truncated normal: acceptance region has negligible mass");
}

}  // namespace stochsched
