#pragma once

#include <numbers>

// Scalar hyperbolic trigonometry of right geodesic triangles, and the
// hypotenuse<->leg change of variables used to reparametrize metric
// families. Angles are radians, lengths are hyperbolic distances. All
// formulas are evaluated in overflow-safe form for lengths up to ~700.

namespace hypext {

// Sides and interior angles of a right geodesic triangle in H^2. s is the
// hypotenuse; t and r are the legs; beta is the angle opposite r at the
// origin vertex, alpha the angle at the far vertex.
struct RightTriangle {
  double s = 0;
  double t = 0;
  double r = 0;
  double alpha = 0;
  double beta = 0;
};

// Angle, offset and interval bounds for reparametrized cut scans.
struct ReparamParams {
  double theta = std::numbers::pi / 2;  // reparametrization angle, (0, pi/2]
  double b = 0;                         // cut offset
  double B = 0;                         // round-cut bound of a family
  double c = 0;                         // limit-interval upper end
  double c_prime = 0;                   // reparametrized interval upper end
};

// log(sinh(a)) for a > 0 and log(cosh(a)) for a >= 0, without overflow.
double log_sinh(double a);
double log_cosh(double a);

// asinh(sinh(a) * scale) for a, scale >= 0, stable when the product would
// overflow. For a > 30 this switches to a + log(scale) + log1p corrections.
double asinh_sinh_scaled(double a, double scale);

// Leg opposite the angle: r with sinh(r) = sin(angle) * sinh(hyp).
// Requires hyp >= 0 and angle in [0, pi/2]. Increasing in both arguments,
// and never exceeds hyp.
double leg_opposite(double hyp, double angle);

// Leg adjacent to the angle: t with cosh(r) * sinh(t) = cos(angle) * sinh(hyp),
// where r = leg_opposite(hyp, angle). Requires hyp > 0, angle in [0, pi/2].
double leg_adjacent(double hyp, double angle);

// Angle opposite a leg: asin(sinh(leg) / sinh(hyp)). Requires 0 <= leg <= hyp
// and hyp > 0.
double angle_opposite(double leg, double hyp);

// Hypotenuse from the two legs: cosh(s) = cosh(t) * cosh(r).
double hyp_from_legs(double t, double r);

// Hypotenuse->leg change of variables lambda = asinh(sinh(lp) sin(theta))
// and its inverse. theta in (0, pi/2]; lambda may be any real (odd in lp).
// theta = pi/2 is the identity; as lp -> inf the difference lambda - lp
// tends to log(sin(theta)).
double theta_reparam(double lambda_prime, double theta);
double theta_reparam_inv(double lambda, double theta);

// Radius at which the reparametrized cut at offset p.b samples a family
// member: leg_opposite(theta_reparam_inv(lambda, p.theta) + p.b, beta).
// Tends to lambda + p.b + log(sin(beta)/sin(p.theta)) as lambda -> inf.
// Throws std::domain_error when the shifted hypotenuse is <= 0.
double reparam_cut_radius(double lambda, double beta, const ReparamParams& p);

// Builds the right triangle with legs (t, r) in the hyperboloid model of H^2
// and measures s, alpha, beta from Minkowski inner products. This route is
// independent of the closed-form leg/angle functions above and is used to
// cross-check them. Throws std::runtime_error if the model points drift off
// the hyperboloid by more than 1e-9 (intended for legs up to ~8).
RightTriangle build_right_triangle(double t, double r);

// Max absolute entry of the difference between the polar-coordinate and
// Fermi-coordinate Gram matrices of H^2 at the point with signed Fermi
// coordinates (t, r) != (0, 0). The coordinate differentials of s(t, r) and
// beta(t, r) are taken by second-order central differences of width `step`,
// both measured in the hyperboloid model. The two Grams agree exactly, so
// the result is pure discretization error, O(step^2).
double fermi_polar_residual(double t, double r, double step = 1e-4);

}  // namespace hypext
