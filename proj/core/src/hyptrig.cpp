#include "hypext/hyptrig.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hypext {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = kPi / 2;
constexpr double kLn2 = std::numbers::ln2;

// Above this the naive sinh/asinh route is abandoned for the log form.
constexpr double kLogFormThreshold = 30.0;

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(std::string("hyptrig: ") + what);
}

}  // namespace

double log_sinh(double a) {
  require(a > 0, "log_sinh requires a > 0");
  if (a < 20.0) return std::log(std::sinh(a));
  return a - kLn2 + std::log1p(-std::exp(-2.0 * a));
}

double log_cosh(double a) {
  require(a >= 0, "log_cosh requires a >= 0");
  if (a < 20.0) return std::log(std::cosh(a));
  return a - kLn2 + std::log1p(std::exp(-2.0 * a));
}

double asinh_sinh_scaled(double a, double scale) {
  require(a >= 0, "asinh_sinh_scaled requires a >= 0");
  require(scale >= 0, "asinh_sinh_scaled requires scale >= 0");
  if (a == 0.0 || scale == 0.0) return 0.0;
  if (a <= kLogFormThreshold) {
    const double p = std::sinh(a) * scale;
    if (std::isfinite(p)) return std::asinh(p);
  }
  const double lx = log_sinh(a) + std::log(scale);
  if (lx <= 25.0) return std::asinh(std::exp(lx));
  // asinh(x) = log(2x) + log1p(...) with the correction below 1e-22 here.
  return lx + kLn2;
}

double leg_opposite(double hyp, double angle) {
  require(hyp >= 0, "leg_opposite requires hyp >= 0");
  require(angle >= 0 && angle <= kHalfPi, "leg_opposite requires angle in [0, pi/2]");
  return asinh_sinh_scaled(hyp, std::sin(angle));
}

double leg_adjacent(double hyp, double angle) {
  require(hyp > 0, "leg_adjacent requires hyp > 0");
  require(angle >= 0 && angle <= kHalfPi, "leg_adjacent requires angle in [0, pi/2]");
  if (angle == 0.0) return hyp;
  const double sb = std::sin(angle);
  const double cb = std::cos(angle);
  if (hyp <= kLogFormThreshold) {
    const double sh = std::sinh(hyp);
    // cosh(r) = sqrt(1 + sinh(hyp)^2 sin^2), from sinh(r) = sinh(hyp) sin.
    return std::asinh(sh * cb / std::sqrt(1.0 + sh * sh * sb * sb));
  }
  // Divide numerator and denominator by sinh(hyp); q may underflow to 0.
  const double q = std::exp(-2.0 * log_sinh(hyp));
  return std::asinh(cb / std::sqrt(q + sb * sb));
}

double angle_opposite(double leg, double hyp) {
  require(hyp > 0, "angle_opposite requires hyp > 0");
  require(leg >= 0, "angle_opposite requires leg >= 0");
  require(leg <= hyp, "angle_opposite requires leg <= hyp");
  if (leg == 0.0) return 0.0;
  double ratio;
  if (hyp <= kLogFormThreshold) {
    ratio = std::sinh(leg) / std::sinh(hyp);
  } else {
    ratio = std::exp(log_sinh(leg) - log_sinh(hyp));
  }
  return std::asin(std::min(ratio, 1.0));
}

double hyp_from_legs(double t, double r) {
  require(t >= 0 && r >= 0, "hyp_from_legs requires t, r >= 0");
  if (t == 0.0) return r;
  if (r == 0.0) return t;
  const double p = std::cosh(t) * std::cosh(r);
  if (std::isfinite(p)) return std::acosh(p);
  // acosh(x) ~ log(2x) for large x.
  return log_cosh(t) + log_cosh(r) + kLn2;
}

double theta_reparam(double lambda_prime, double theta) {
  require(theta > 0 && theta <= kHalfPi, "theta_reparam requires theta in (0, pi/2]");
  const double a = std::abs(lambda_prime);
  const double v = asinh_sinh_scaled(a, std::sin(theta));
  return std::copysign(v, lambda_prime);
}

double theta_reparam_inv(double lambda, double theta) {
  require(theta > 0 && theta <= kHalfPi, "theta_reparam_inv requires theta in (0, pi/2]");
  const double a = std::abs(lambda);
  const double v = asinh_sinh_scaled(a, 1.0 / std::sin(theta));
  return std::copysign(v, lambda);
}

double reparam_cut_radius(double lambda, double beta, const ReparamParams& p) {
  const double lp = theta_reparam_inv(lambda, p.theta);
  const double hyp = lp + p.b;
  require(hyp > 0, "reparam_cut_radius: shifted hypotenuse is not positive");
  return leg_opposite(hyp, beta);
}

namespace {

// Minkowski form of signature (-,+,+) on R^{2,1}.
double mink(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

// Point of the hyperboloid with Fermi coordinates (t, r) along the axis
// geodesic tau |-> (cosh tau, sinh tau, 0).
std::array<double, 3> fermi_point(double t, double r) {
  return {std::cosh(t) * std::cosh(r), std::sinh(t) * std::cosh(r), std::sinh(r)};
}

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

}  // namespace

RightTriangle build_right_triangle(double t, double r) {
  require(t >= 0 && r >= 0, "build_right_triangle requires t, r >= 0");
  const std::array<double, 3> o{1, 0, 0};
  const std::array<double, 3> y{std::cosh(t), std::sinh(t), 0};
  const std::array<double, 3> p = fermi_point(t, r);

  if (std::abs(mink(y, y) + 1.0) > 1e-9 || std::abs(mink(p, p) + 1.0) > 1e-9)
    throw std::runtime_error("hyptrig: hyperboloid normalization drifted beyond 1e-9");

  RightTriangle out;
  out.t = t;
  out.r = r;
  const double cs = std::max(1.0, -mink(o, p));
  out.s = std::acosh(cs);

  const double sh_s = std::sinh(out.s);
  if (sh_s == 0.0) {  // both legs zero
    out.beta = 0.0;
    out.alpha = 0.0;
    return out;
  }

  // Unit tangents at o: along the axis, and toward p.
  const std::array<double, 3> dir_axis{0, 1, 0};
  std::array<double, 3> n;
  for (int i = 0; i < 3; ++i) n[i] = (p[i] - cs * o[i]) / sh_s;
  if (r == 0.0) {
    out.beta = 0.0;
  } else if (t == 0.0) {
    out.beta = kHalfPi;
  } else {
    out.beta = std::acos(clamp_unit(mink(n, dir_axis)));
  }

  // Interior angle at p, between the sides toward o and toward y.
  if (r == 0.0) {
    out.alpha = kHalfPi;  // limit of the degenerate triangle
  } else if (t == 0.0) {
    out.alpha = 0.0;
  } else {
    const double cr = std::cosh(r);
    std::array<double, 3> to_o, to_y;
    for (int i = 0; i < 3; ++i) {
      to_o[i] = (o[i] - cs * p[i]) / sh_s;
      to_y[i] = (y[i] - cr * p[i]) / std::sinh(r);
    }
    out.alpha = std::acos(clamp_unit(mink(to_o, to_y)));
  }
  return out;
}

double fermi_polar_residual(double t, double r, double step) {
  require(step > 0, "fermi_polar_residual requires step > 0");
  require(t != 0.0 || r != 0.0, "fermi_polar_residual undefined at the origin");

  const auto polar = [](double tt, double rr) {
    const std::array<double, 3> p = fermi_point(tt, rr);
    const double s = std::acosh(std::max(1.0, p[0]));
    const double beta = std::atan2(p[2], p[1]);
    return std::array<double, 2>{s, beta};
  };

  const auto center = polar(t, r);
  const double h = step;

  // Central differences of (s, beta) against (t, r); beta is unwrapped
  // around the center value to survive the atan2 branch cut.
  auto unwrap = [&](double beta) {
    double d = beta - center[1];
    while (d > kPi) { beta -= 2 * kPi; d = beta - center[1]; }
    while (d < -kPi) { beta += 2 * kPi; d = beta - center[1]; }
    return beta;
  };
  const auto tp = polar(t + h, r), tm = polar(t - h, r);
  const auto rp = polar(t, r + h), rm = polar(t, r - h);
  const double ds_dt = (tp[0] - tm[0]) / (2 * h);
  const double ds_dr = (rp[0] - rm[0]) / (2 * h);
  const double db_dt = (unwrap(tp[1]) - unwrap(tm[1])) / (2 * h);
  const double db_dr = (unwrap(rp[1]) - unwrap(rm[1])) / (2 * h);

  // Polar Gram pulled to (t, r): J^T diag(1, sinh^2 s) J.
  const double w = std::sinh(center[0]) * std::sinh(center[0]);
  const double g_tt = ds_dt * ds_dt + w * db_dt * db_dt;
  const double g_tr = ds_dt * ds_dr + w * db_dt * db_dr;
  const double g_rr = ds_dr * ds_dr + w * db_dr * db_dr;

  const double ch_r = std::cosh(r);
  double res = std::abs(g_tt - ch_r * ch_r);
  res = std::max(res, std::abs(g_tr));
  res = std::max(res, std::abs(g_rr - 1.0));
  return res;
}

}  // namespace hypext
