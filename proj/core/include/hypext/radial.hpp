#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hypext/spheres.hpp"

// Metrics with a center, written outside the center as g = g_r + dr^2 with
// g_r a form field on S^{n-1}, together with one-parameter families of such
// metrics sharing the center and its geodesic spheres.

namespace hypext {

// A metric with center on an n-manifold, represented by its cut fields.
// The radial part dr^2 is implicit. The normalized cut field is primary so
// that families with exactly round normalized cuts reproduce them bitwise;
// the spherical cut is always sinh^2(r) times the normalized one.
struct RadialMetric {
  int n = 0;  // manifold dimension; cuts live on S^{n-1}
  std::function<SphereForm(double)> normalized;  // r > 0 -> normalized cut

  SphereForm normalized_cut(double r) const;
  SphereForm cut(double r) const;
};

// The spherical cut g_{r0} and the normalized spherical cut
// g_{r0} / sinh^2(r0). Both require r0 > 0.
SphereForm spherical_cut(const RadialMetric& g, double r0);
SphereForm normalized_cut(const RadialMetric& g, double r0);

// One-parameter family lambda -> metric, all sharing center and spheres.
// hyperbolic_origin_B: if set, normalized cuts at radius lambda + b are
// exactly round for every b <= B. cut_limit: analytic normalized cut limit
// at offset b, when the family has one in closed form.
struct MetricFamily {
  std::string name;
  double lambda0 = 0;
  std::function<RadialMetric(double)> at;
  std::optional<double> hyperbolic_origin_B;
  std::function<SphereForm(double)> cut_limit;
};

// Hyperbolic space: cut sinh^2(r) * round, normalized cut round.
RadialMetric make_hyperbolic(int n);
// Euclidean space: cut r^2 * round.
RadialMetric make_euclidean(int n);

// Constant family lifting a single metric.
MetricFamily constant_family(const RadialMetric& g, std::string name);

// C^2 smoothstep: 0 for x <= B, 1 for x >= B + L, quintic in between.
double bump_profile(double x, double B, double L);

struct BumpSpec {
  double B = -1.0;
  double amp = 0.1;
  double L = 2.0;
};

// Family with cut fields sinh^2(rho) * (round + chi(rho - lambda) * amp * P),
// P the built-in perturbation field and chi the smoothstep over [B, B + L].
// Its normalized cut at radius lambda + b equals round + chi(b) * amp * P
// independently of lambda, so the family has exact cut limits at every b and
// is hyperbolic around the origin with constant B. Throws
// std::invalid_argument if round + amp * P fails the positivity sweep.
MetricFamily make_bump_family(int n, const BumpSpec& spec = {});

// Negative control: the bump deviation is modulated by sin^2(lambda), so
// normalized cuts at lambda + b oscillate in lambda wherever chi(b) > 0 and
// the family has no cut limit for such b.
MetricFamily make_oscillating_family(int n, const BumpSpec& spec = {});

// Families addressable by name: "hyperbolic", "euclidean", "bump",
// "oscillating". The spec parameters apply to the last two.
MetricFamily family_by_name(const std::string& name, int n, const BumpSpec& spec = {});

struct OriginCheck {
  bool hyperbolic = true;
  double max_residual = 0;
};

// Checks that normalized cuts at lambda + b are round (grid C^0 distance
// below 1e-9) over the given (lambda, b) samples, all with b <= B.
OriginCheck check_hyperbolic_origin(const MetricFamily& fam, double B,
                                    const std::vector<std::pair<double, double>>& samples,
                                    const GridSpec& grid = {});

}  // namespace hypext
