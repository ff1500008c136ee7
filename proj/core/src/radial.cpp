#include "hypext/radial.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace hypext {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(std::string("radial: ") + what);
}

}  // namespace

SphereForm RadialMetric::normalized_cut(double r) const {
  require(r > 0, "cut radius must be positive");
  return normalized(r);
}

SphereForm RadialMetric::cut(double r) const {
  require(r > 0, "cut radius must be positive");
  const double sh = std::sinh(r);
  return scale_form(sh * sh, normalized(r));
}

SphereForm spherical_cut(const RadialMetric& g, double r0) { return g.cut(r0); }

SphereForm normalized_cut(const RadialMetric& g, double r0) {
  return g.normalized_cut(r0);
}

RadialMetric make_hyperbolic(int n) {
  const SphereForm round = round_metric(n);
  return RadialMetric{n, [round](double) { return round; }};
}

RadialMetric make_euclidean(int n) {
  const SphereForm round = round_metric(n);
  return RadialMetric{n, [round](double r) {
                        const double f = r / std::sinh(r);
                        return scale_form(f * f, round);
                      }};
}

MetricFamily constant_family(const RadialMetric& g, std::string name) {
  MetricFamily fam;
  fam.name = std::move(name);
  fam.lambda0 = 0;
  fam.at = [g](double) { return g; };
  return fam;
}

double bump_profile(double x, double B, double L) {
  if (x <= B) return 0.0;
  if (x >= B + L) return 1.0;
  const double u = (x - B) / L;
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

namespace {

// round + coeff * amp * P, returning the round field bitwise when the
// coefficient vanishes.
SphereForm bump_form(const SphereForm& round, const SphereForm& pert,
                     double coeff, double amp) {
  if (coeff == 0.0) return round;
  return add_forms(round, scale_form(coeff * amp, pert));
}

void check_positivity(int n, double amp) {
  const SphereForm worst = add_forms(round_metric(n), scale_form(amp, perturbation_field(n)));
  const Atlas& atlas = worst.atlas();
  GridSpec grid;
  grid.per_axis = 9;
  grid.cap_per_chart = 10000;
  double min_eig = 1e300;
  for (const Chart& c : atlas.charts())
    for (const Vec& x : chart_lattice(atlas, c, grid)) {
      Eigen::SelfAdjointEigenSolver<Mat> es(worst.eval(c, x));
      min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
    }
  if (min_eig <= 0)
    throw std::invalid_argument("radial: bump amplitude breaks positive definiteness");
}

}  // namespace

MetricFamily make_bump_family(int n, const BumpSpec& spec) {
  check_positivity(n, spec.amp);
  const SphereForm round = round_metric(n);
  const SphereForm pert = perturbation_field(n);
  const double B = spec.B, amp = spec.amp, L = spec.L;

  MetricFamily fam;
  fam.name = "bump";
  fam.lambda0 = 0;
  fam.at = [=](double lambda) {
    return RadialMetric{n, [=](double rho) {
                          return bump_form(round, pert, bump_profile(rho - lambda, B, L), amp);
                        }};
  };
  fam.hyperbolic_origin_B = B;
  fam.cut_limit = [=](double b) {
    return bump_form(round, pert, bump_profile(b, B, L), amp);
  };
  return fam;
}

MetricFamily make_oscillating_family(int n, const BumpSpec& spec) {
  check_positivity(n, spec.amp);
  const SphereForm round = round_metric(n);
  const SphereForm pert = perturbation_field(n);
  const double B = spec.B, amp = spec.amp, L = spec.L;

  MetricFamily fam;
  fam.name = "oscillating";
  fam.lambda0 = 0;
  fam.at = [=](double lambda) {
    const double mod = std::sin(lambda) * std::sin(lambda);
    return RadialMetric{n, [=](double rho) {
                          return bump_form(round, pert,
                                           bump_profile(rho - lambda, B, L) * mod, amp);
                        }};
  };
  fam.hyperbolic_origin_B = B;
  return fam;
}

MetricFamily family_by_name(const std::string& name, int n, const BumpSpec& spec) {
  if (name == "hyperbolic") {
    MetricFamily fam = constant_family(make_hyperbolic(n), "hyperbolic");
    fam.hyperbolic_origin_B = std::numeric_limits<double>::infinity();
    const SphereForm round = round_metric(n);
    fam.cut_limit = [round](double) { return round; };
    return fam;
  }
  if (name == "euclidean") return constant_family(make_euclidean(n), "euclidean");
  if (name == "bump") return make_bump_family(n, spec);
  if (name == "oscillating") return make_oscillating_family(n, spec);
  throw std::invalid_argument("radial: unknown family '" + name + "'");
}

OriginCheck check_hyperbolic_origin(const MetricFamily& fam, double B,
                                    const std::vector<std::pair<double, double>>& samples,
                                    const GridSpec& grid) {
  OriginCheck out;
  SphereForm round;
  for (const auto& [lambda, b] : samples) {
    require(b <= B, "origin check sample has b > B");
    require(lambda > std::max(fam.lambda0, -b), "origin check sample lambda too small");
    const RadialMetric g = fam.at(lambda);
    if (!round) round = round_metric(g.n);
    const C2Distance d =
        c2_distance(g.normalized_cut(lambda + b), round, grid, {}, /*orders=*/0);
    out.max_residual = std::max(out.max_residual, d.d0);
  }
  out.hyperbolic = out.max_residual < 1e-9;
  return out;
}

}  // namespace hypext
