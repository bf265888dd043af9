#pragma once

#include <random>

namespace stochsched {

using Rng = std::mt19937_64;

/// Triangular effort distribution with support [min, max] and mode `mode`.
/// The all-zero triple is the "no demand" distribution.
struct TriangularDist {
  double min = 0.0;
  double mode = 0.0;
  double max = 0.0;

  static TriangularDist zero() { return {}; }
  static TriangularDist point(double c) { return {c, c, c}; }

  bool is_zero() const { return min == 0.0 && mode == 0.0 && max == 0.0; }
  bool is_degenerate() const { return min == max; }
  double mean() const { return (min + mode + max) / 3.0; }
  bool valid() const { return min >= 0.0 && min <= mode && mode <= max; }

  friend bool operator==(const TriangularDist&, const TriangularDist&) = default;
};

/// Normal(mean, stdev) restricted to [lower, upper].
struct TruncatedNormal {
  double lower = 0.0;
  double upper = 1.0;
  double mean = 0.5;
  double stdev = 1.0;

  bool valid() const { return lower < upper && stdev > 0.0; }
};

/// P(D <= zeta).
double tri_cdf(const TriangularDist& d, double zeta);

/// Expected shortfall E[(D - zeta)^+], closed form. Convex and nonincreasing
/// in zeta, with derivative tri_cdf(d, zeta) - 1.
double tri_shortfall(const TriangularDist& d, double zeta);

/// Inverse-CDF draw.
double tri_quantile(const TriangularDist& d, double prob);

double sample(const TriangularDist& d, Rng& rng);

/// Rejection sampling from the untruncated normal.
double sample(const TruncatedNormal& d, Rng& rng);

/// Uniform on [0, 1). Fixed bit recipe so streams do not depend on the
/// standard library's distribution implementation.
double uniform01(Rng& rng);

/// Standard normal draw (polar Box-Muller, no cached spare).
double standard_normal(Rng& rng);

/// Uniform integer in [lo, hi].
int uniform_int(Rng& rng, int lo, int hi);

}  // namespace stochsched
