#pragma once

#include <functional>
#include <optional>

#include "hypext/radial.hpp"
#include "hypext/spheres.hpp"

// The warped-product extension cosh^2(r) * (hyperbolic k-metric) + h of a
// metric h with center, and the expression of its geodesic-sphere cuts in
// join coordinates (w, u, beta) on S^{k-1} x S^{n-1} x (0, pi/2).

namespace hypext {

// Point of a geodesic sphere in join coordinates; s is the sphere radius.
struct JoinPoint {
  Vec w;  // unit vector in R^k
  Vec u;  // unit vector in R^n
  double beta = 0;
  std::optional<double> s;
};

// The same point in product coordinates: (t, w) polar in the hyperbolic
// factor, (r, u) polar in the fiber.
struct ProductPoint {
  double t = 0;
  Vec w;
  double r = 0;
  Vec u;
};

// Inverse of the join coordinates: t and r from the right triangle with
// hypotenuse s and angle beta. Requires jp.s.
ProductPoint join_point_to_product(const JoinPoint& jp);
// Forward map: s from the legs, beta from (r, s).
JoinPoint join_point_from_product(const ProductPoint& pp);

// Block form on join coordinates: a(beta) times the round S^{k-1} metric,
// plus a form field on S^{n-1} depending on beta, plus c(beta) dbeta^2.
// The three blocks are mutually orthogonal.
struct JoinForm {
  int k = 0;
  int n = 0;
  std::function<double(double)> a;
  std::function<SphereForm(double)> b_field;
  std::function<double(double)> c;
};

// Cut of the extension of h at radius s:
//   a = sinh^2(s) cos^2(beta), b = (un-normalized) cut of h at the triangle
//   leg r(s, beta), c = sinh^2(s).
JoinForm extension_cut(const RadialMetric& h, int k, double s);

// Normalized cut of the extension, from the normalized cut field of h:
//   a = cos^2(beta), b = sin^2(beta) * hhat_{r(s, beta)}, c = 1.
JoinForm extension_normalized_cut(const std::function<SphereForm(double)>& hhat,
                                  int k, int n, double s);
JoinForm extension_normalized_cut(const RadialMetric& h, int k, double s);

// Realizes a JoinForm as a SphereForm on S^{n+k-1} through the join
// parametrization X = (cos(beta) w, sin(beta) u). Evaluation throws
// std::domain_error within beta_guard of the singular set beta in {0, pi/2};
// comparisons restrict to a masked beta interval well inside the guard.
SphereForm join_to_sphereform(const JoinForm& jf, double beta_guard = 1e-6);

// Angle beta of an ambient point of S^{n+k-1} under the k|n splitting.
double join_angle(const Vec& X, int k);

// Grid mask selecting beta in [delta, pi/2 - delta].
PointMask beta_mask(int k, double delta);

// Independent route to the extension cut: parametrize the geodesic sphere of
// radius s by chart coordinates, map to product coordinates through
// join_point_to_product, and pull the product metric
//   cosh^2(r)(sinh^2(t) round_{k-1} + dt^2) + h_r + dr^2
// back through central-difference Jacobians of width fd_step. Shares no
// algebra with extension_cut beyond the coordinate construction itself.
SphereForm pullback_oracle_cut(const RadialMetric& h, int k, double s,
                               double fd_step = 1e-4, double beta_guard = 1e-6);

// Max residual between the polar and Fermi Gram matrices on the 2-plane
// spanned by the radius and angle directions, with (t, r) as functions of
// (s, beta) differenced centrally. Samples are (s, beta) pairs. The identity
// holds on any extension independently of h, so no metric argument is taken.
double fermi_polar_residual_join(const std::vector<std::pair<double, double>>& samples,
                                 double step = 1e-4);

}  // namespace hypext
