#include "hypext/extension.hpp"

#include <cmath>
#include <stdexcept>

#include "hypext/hyptrig.hpp"

namespace hypext {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(std::string("extension: ") + what);
}

}  // namespace

ProductPoint join_point_to_product(const JoinPoint& jp) {
  require(jp.s.has_value() && *jp.s > 0, "join point needs a positive radius");
  ProductPoint pp;
  pp.w = jp.w;
  pp.u = jp.u;
  pp.t = leg_adjacent(*jp.s, jp.beta);
  pp.r = leg_opposite(*jp.s, jp.beta);
  return pp;
}

JoinPoint join_point_from_product(const ProductPoint& pp) {
  JoinPoint jp;
  jp.w = pp.w;
  jp.u = pp.u;
  const double s = hyp_from_legs(pp.t, pp.r);
  jp.s = s;
  jp.beta = angle_opposite(pp.r, s);
  return jp;
}

JoinForm extension_cut(const RadialMetric& h, int k, double s) {
  require(s > 0, "cut radius must be positive");
  const double sh2 = std::sinh(s) * std::sinh(s);
  JoinForm jf;
  jf.k = k;
  jf.n = h.n;
  jf.a = [sh2](double beta) {
    const double cb = std::cos(beta);
    return sh2 * cb * cb;
  };
  jf.b_field = [h, s](double beta) { return h.cut(leg_opposite(s, beta)); };
  jf.c = [sh2](double) { return sh2; };
  return jf;
}

JoinForm extension_normalized_cut(const std::function<SphereForm(double)>& hhat,
                                  int k, int n, double s) {
  require(s > 0, "cut radius must be positive");
  JoinForm jf;
  jf.k = k;
  jf.n = n;
  jf.a = [](double beta) {
    const double cb = std::cos(beta);
    return cb * cb;
  };
  jf.b_field = [hhat, s](double beta) {
    const double sb = std::sin(beta);
    return scale_form(sb * sb, hhat(leg_opposite(s, beta)));
  };
  jf.c = [](double) { return 1.0; };
  return jf;
}

JoinForm extension_normalized_cut(const RadialMetric& h, int k, double s) {
  return extension_normalized_cut(h.normalized, k, h.n, s);
}

double join_angle(const Vec& X, int k) {
  return std::atan2(X.tail(X.size() - k).norm(), X.head(k).norm());
}

PointMask beta_mask(int k, double delta) {
  return [k, delta](const Vec& X) {
    const double beta = join_angle(X, k);
    return beta >= delta && beta <= kHalfPi - delta;
  };
}

SphereForm join_to_sphereform(const JoinForm& jf, double beta_guard) {
  const int k = jf.k, n = jf.n, m = k + n;
  auto atlas = shared_atlas(m);
  auto atlas_n = shared_atlas(n);

  auto eval = [jf, k, n, atlas, atlas_n, beta_guard](const Chart& c, const Vec& x) -> Mat {
    const Vec X = atlas->embed(c, x);
    const Vec XK = X.head(k);
    const Vec XN = X.tail(n);
    const double cb = XK.norm();
    const double sb = XN.norm();
    const double beta = std::atan2(sb, cb);
    if (beta < beta_guard || beta > kHalfPi - beta_guard)
      throw std::domain_error("extension: join coordinates evaluated at the singular set");
    const Vec w = XK / cb;
    const Vec u = XN / sb;

    const double a_val = jf.a(beta);
    const double c_val = jf.c(beta);
    const SphereForm b_form = jf.b_field(beta);
    const Chart& cu = atlas_n->best_chart(u);
    const Mat B = b_form.eval(cu, atlas_n->project(cu, u));

    const Mat J = atlas->embed_jacobian(c, x);
    const int d = m - 1;
    Mat dbeta(1, d);
    Mat dw(k, d), dy(n - 1, d);
    for (int i = 0; i < d; ++i) {
      const Vec VK = J.col(i).head(k);
      const Vec VN = J.col(i).tail(n);
      const double db = u.dot(VN) / cb;
      dbeta(0, i) = db;
      dw.col(i) = (VK - w.dot(VK) * w) / cb;
      const Vec du = (VN - u.dot(VN) * u) / sb;
      dy.col(i) = atlas_n->tangent_coords(cu, du);
    }

    Mat G = a_val * (dw.transpose() * dw);
    G += dy.transpose() * B * dy;
    G += c_val * (dbeta.transpose() * dbeta);
    return G;
  };
  return SphereForm(atlas, std::move(eval));
}

SphereForm pullback_oracle_cut(const RadialMetric& h, int k, double s,
                               double fd_step, double beta_guard) {
  require(s > 0, "cut radius must be positive");
  require(fd_step > 0, "finite-difference step must be positive");
  const int n = h.n, m = k + n;
  auto atlas = shared_atlas(m);
  auto atlas_n = shared_atlas(n);

  // Product coordinates of the sphere point over chart coordinates x.
  auto product = [atlas, k, n, s, beta_guard](const Chart& c, const Vec& x) -> ProductPoint {
    const Vec X = atlas->embed(c, x);
    const Vec XK = X.head(k);
    const Vec XN = X.tail(n);
    const double beta = std::atan2(XN.norm(), XK.norm());
    if (beta < beta_guard || beta > kHalfPi - beta_guard)
      throw std::domain_error("extension: join coordinates evaluated at the singular set");
    JoinPoint jp;
    jp.w = XK / XK.norm();
    jp.u = XN / XN.norm();
    jp.beta = beta;
    jp.s = s;
    return join_point_to_product(jp);
  };

  auto eval = [product, h, atlas_n, fd_step, k, n, m](const Chart& c, const Vec& x) -> Mat {
    const int d = m - 1;
    const double hstep = fd_step;
    const ProductPoint center = product(c, x);

    const SphereForm fiber_cut = h.cut(center.r);
    const Chart& cu = atlas_n->best_chart(center.u);
    const Mat B = fiber_cut.eval(cu, atlas_n->project(cu, center.u));

    Mat dt(1, d), dr(1, d), dw(k, d), dy(n - 1, d);
    Vec xp = x;
    for (int i = 0; i < d; ++i) {
      xp[i] = x[i] + hstep;
      const ProductPoint pp = product(c, xp);
      xp[i] = x[i] - hstep;
      const ProductPoint pm = product(c, xp);
      xp[i] = x[i];
      dt(0, i) = (pp.t - pm.t) / (2 * hstep);
      dr(0, i) = (pp.r - pm.r) / (2 * hstep);
      dw.col(i) = (pp.w - pm.w) / (2 * hstep);
      dy.col(i) = atlas_n->tangent_coords(cu, (pp.u - pm.u) / (2 * hstep));
    }

    const double ch_r2 = std::cosh(center.r) * std::cosh(center.r);
    const double sh_t2 = std::sinh(center.t) * std::sinh(center.t);
    Mat G = ch_r2 * (sh_t2 * (dw.transpose() * dw) + dt.transpose() * dt);
    G += dy.transpose() * B * dy;
    G += dr.transpose() * dr;
    return G;
  };
  return SphereForm(atlas, std::move(eval));
}

double fermi_polar_residual_join(const std::vector<std::pair<double, double>>& samples,
                                 double step) {
  require(step > 0, "finite-difference step must be positive");
  double worst = 0.0;
  for (const auto& [s, beta] : samples) {
    require(s > step, "sample radius too small for the stencil");
    require(beta > step && beta < kHalfPi - step, "sample angle too close to the boundary");
    const auto legs = [](double ss, double bb) {
      return std::pair<double, double>{leg_adjacent(ss, bb), leg_opposite(ss, bb)};
    };
    const auto [tp_s, rp_s] = legs(s + step, beta);
    const auto [tm_s, rm_s] = legs(s - step, beta);
    const auto [tp_b, rp_b] = legs(s, beta + step);
    const auto [tm_b, rm_b] = legs(s, beta - step);
    const double dt_ds = (tp_s - tm_s) / (2 * step);
    const double dr_ds = (rp_s - rm_s) / (2 * step);
    const double dt_db = (tp_b - tm_b) / (2 * step);
    const double dr_db = (rp_b - rm_b) / (2 * step);

    const double r = leg_opposite(s, beta);
    const double w = std::cosh(r) * std::cosh(r);
    // Fermi Gram pulled to (s, beta) against the polar form diag(1, sinh^2 s).
    const double g_ss = w * dt_ds * dt_ds + dr_ds * dr_ds;
    const double g_sb = w * dt_ds * dt_db + dr_ds * dr_db;
    const double g_bb = w * dt_db * dt_db + dr_db * dr_db;
    const double sh_s = std::sinh(s);

    double res = std::abs(g_ss - 1.0);
    res = std::max(res, std::abs(g_sb));
    res = std::max(res, std::abs(g_bb - sh_s * sh_s));
    worst = std::max(worst, res);
  }
  return worst;
}

}  // namespace hypext
