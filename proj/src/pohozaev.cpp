#include "bubblelab/pohozaev.hpp"

#include <cmath>
#include <stdexcept>

#include "bubblelab/diagnostics.hpp"
#include "bubblelab/profile.hpp"
#include "bubblelab/quadrature.hpp"
#include "json.hpp"

namespace bubblelab {

PohozaevConfig PohozaevConfig::make(const DimensionParams& d, double beta, double tau, double mu,
                                    double L, int ball_index) {
  PohozaevConfig c;
  const double denom = beta + 1.0 - 2.0 * tau;
  double ratio = (denom > 0.0) ? (beta + 4.0 - d.N) / denom : 1.0;
  c.theta = std::max(ratio, 1.0);
  c.delta = std::pow(mu, -c.theta);
  c.ball_index = ball_index;
  if (!(c.delta < 0.25 * L))
    throw std::invalid_argument("PohozaevConfig: delta >= L/4, balls overlap");
  return c;
}

namespace {

struct SphereSamples {
  // precomputed u, gradient and geometry on the quadrature circle
  std::vector<double> phi, w;  // angle nodes and sin^{N-2}-weighted GL weights
  std::vector<double> uval, u1, ur, unu;
  double delta = 0.0;
  double measure = 0.0;  // omega_{N-2} delta^{N-1}
};

SphereSamples sample_sphere(const Field& u, const Vec2& center, double delta,
                            const DimensionParams& d, int order) {
  SphereSamples s;
  s.delta = delta;
  s.measure = transverse_sphere_area(d.N) * std::pow(delta, d.N - 1.0);
  const auto& x = gauss_nodes(order);
  const auto& gw = gauss_weights(order);
  s.phi.resize(order);
  s.w.resize(order);
  s.uval.resize(order);
  s.u1.resize(order);
  s.ur.resize(order);
  s.unu.resize(order);
  for (int i = 0; i < order; ++i) {
    const double phi = 0.5 * M_PI * (x[i] + 1.0);
    s.phi[i] = phi;
    s.w[i] = 0.5 * M_PI * gw[i] * std::pow(std::sin(phi), d.N - 2.0);
    const Vec2 p{center.y1 + delta * std::cos(phi), center.r + delta * std::sin(phi)};
    double val, d1, dr;
    u.sample_gradient(p, val, d1, dr);
    s.uval[i] = val;
    s.u1[i] = d1;
    s.ur[i] = dr;
    s.unu[i] = d1 * std::cos(phi) + dr * std::sin(phi);
  }
  return s;
}

double surf(const SphereSamples& s, const std::function<double(int)>& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s.phi.size(); ++i) acc += s.w[i] * f(static_cast<int>(i));
  return acc * s.measure;
}

}  // namespace

PohozaevReport translation_identity(const Field& u, const Ansatz& a, const PohozaevConfig& cfg) {
  if (cfg.ball_index < 0 || cfg.ball_index >= static_cast<int>(a.bubbles.size()))
    throw std::invalid_argument("translation_identity: ball index out of range");
  const DimensionParams& d = a.dims;
  const Vec2 center = a.bubbles[cfg.ball_index].center;
  for (int i = 0; i < static_cast<int>(a.bubbles.size()); ++i) {
    if (i == cfg.ball_index) continue;
    if (std::sqrt(dist2(center, a.bubbles[i].center)) <
        cfg.delta + a.cutoff.outer_radius)
      throw std::invalid_argument("translation_identity: ball overlaps another cutoff annulus");
  }
  const double beta = a.potential.beta;
  const SphereSamples s = sample_sphere(u, center, cfg.delta, d, cfg.surface_order);

  PohozaevReport rep;
  const double t_grad1 = -surf(s, [&](int i) { return s.unu[i] * s.u1[i]; });
  const double t_grad2 =
      0.5 * surf(s, [&](int i) { return (s.u1[i] * s.u1[i] + s.ur[i] * s.ur[i]) * std::cos(s.phi[i]); });
  const double t_qb = 0.5 * surf(s, [&](int i) {
    const Vec2 p{center.y1 + cfg.delta * std::cos(s.phi[i]), center.r + cfg.delta * std::sin(s.phi[i])};
    return eval_Q(a.potential, p) * s.uval[i] * s.uval[i] * std::cos(s.phi[i]);
  });
  auto vol = ball_integral(
      [&](const Vec2& p) {
        double q1, qr;
        eval_Q_gradient(a.potential, p, q1, qr);
        const double uu = u.sample(p, 3);
        return q1 * uu * uu;
      },
      center, cfg.delta, d, cfg.ball_radial_panels, cfg.ball_nodes,
      0.25 / a.bubbles[cfg.ball_index].height);
  const double t_qvol = -0.5 * vol.value;
  rep.rhs = surf(s, [&](int i) {
               return std::pow(std::abs(s.uval[i]), d.two_star) * std::cos(s.phi[i]);
             }) /
            d.two_star;

  rep.terms.push_back({"boundary normal-gradient product -Int dnu(u) d1(u)", t_grad1, 0.0});
  rep.terms.push_back({"boundary gradient-square (1/2) Int |grad u|^2 nu_1", t_grad2, 0.0});
  rep.terms.push_back({"boundary potential (1/2) Int Q u^2 nu_1", t_qb, -(beta + 2.0)});
  rep.terms.push_back({"volume potential-gradient -(1/2) Int d1(Q) u^2", t_qvol, -(beta + 1.0)});
  rep.lhs_total = t_grad1 + t_grad2 + t_qb + t_qvol;
  rep.residual = rep.lhs_total - rep.rhs;
  return rep;
}

PohozaevReport dilation_identity(const Field& u, const Ansatz& a, const PohozaevConfig& cfg) {
  if (cfg.ball_index < 0 || cfg.ball_index >= static_cast<int>(a.bubbles.size()))
    throw std::invalid_argument("dilation_identity: ball index out of range");
  const DimensionParams& d = a.dims;
  const Vec2 center = a.bubbles[cfg.ball_index].center;
  const double beta = a.potential.beta;
  const double delta = cfg.delta;
  const SphereSamples s = sample_sphere(u, center, delta, d, cfg.surface_order);

  const double s1 = -delta * surf(s, [&](int i) { return s.unu[i] * s.unu[i]; });
  const double s2 =
      0.5 * delta * surf(s, [&](int i) { return s.u1[i] * s.u1[i] + s.ur[i] * s.ur[i]; });
  const double s3 = 0.5 * (2.0 - d.N) * surf(s, [&](int i) { return s.unu[i] * s.uval[i]; });
  const double s4 = 0.5 * delta * surf(s, [&](int i) {
    const Vec2 p{center.y1 + delta * std::cos(s.phi[i]), center.r + delta * std::sin(s.phi[i])};
    return eval_Q(a.potential, p) * s.uval[i] * s.uval[i];
  });
  const double grade = 0.25 / a.bubbles[cfg.ball_index].height;
  auto vol_grad = ball_integral(
      [&](const Vec2& p) {
        double q1, qr;
        eval_Q_gradient(a.potential, p, q1, qr);
        const double uu = u.sample(p, 3);
        return (q1 * (p.y1 - center.y1) + qr * (p.r - center.r)) * uu * uu;
      },
      center, delta, d, cfg.ball_radial_panels, cfg.ball_nodes, grade);
  auto vol_q = ball_integral(
      [&](const Vec2& p) {
        const double uu = u.sample(p, 3);
        return eval_Q(a.potential, p) * uu * uu;
      },
      center, delta, d, cfg.ball_radial_panels, cfg.ball_nodes, grade);
  const double s5 = -0.5 * vol_grad.value;
  const double s6 = -vol_q.value;

  PohozaevReport rep;
  rep.rhs = delta *
            surf(s, [&](int i) { return std::pow(std::abs(s.uval[i]), d.two_star); }) /
            d.two_star;
  rep.terms.push_back({"boundary -delta Int (dnu u)^2", s1, 0.0});
  rep.terms.push_back({"boundary (delta/2) Int |grad u|^2", s2, 0.0});
  rep.terms.push_back({"boundary (2-N)/2 Int dnu(u) u", s3, 0.0});
  rep.terms.push_back({"boundary (delta/2) Int Q u^2", s4, -(beta + 2.0)});
  rep.terms.push_back({"volume -(1/2) Int <grad Q, y-x_j> u^2", s5, -(beta + 2.0)});
  rep.terms.push_back({"volume -Int Q u^2", s6, -(beta + 2.0)});
  rep.lhs_total = s1 + s2 + s3 + s4 + s5 + s6;
  rep.residual = rep.lhs_total - rep.rhs;
  rep.interaction_term = s1 + s2 + s3;
  rep.potential_term = -(s5 + s6);
  return rep;
}

DilationBalance dilation_balance(const Field& u, const Ansatz& a, const WeightedNormParams& np,
                                 int ball_index, double delta_far) {
  const DimensionParams& d = a.dims;
  const double L = a.spacing();
  DilationBalance out;
  out.delta = (delta_far > 0.0) ? delta_far : std::min(0.22 * L, std::max(0.1 * L, 1.0));
  const Vec2 center = a.bubbles[ball_index].center;

  // potential side: volume quadrature of (Q + <grad Q, y-x_j>/2) u^2
  auto q = ball_integral(
      [&](const Vec2& p) {
        double q1, qr;
        eval_Q_gradient(a.potential, p, q1, qr);
        const double uu = u.sample(p, 3);
        const double inner = q1 * (p.y1 - center.y1) + qr * (p.r - center.r);
        return (eval_Q(a.potential, p) + 0.5 * inner) * uu * uu;
      },
      center, out.delta, d, 28, 28, 0.25 / a.bubbles[ball_index].height);
  out.potential = q.value;

  // interaction side: monopole pairing of the fitted tail
  const auto fit =
      green_tail_fit(u, a, np, a.cutoff.outer_radius + 0.3, std::min(4.0, 0.75 * L));
  out.fitted_monopoles = fit.monopole;
  double h_val = 0.0;
  for (std::size_t i = 0; i < a.bubbles.size(); ++i) {
    if (static_cast<int>(i) == ball_index) continue;
    const double dy1 = center.y1 - a.bubbles[i].center.y1;
    const double rho = std::sqrt(dist2(center, a.bubbles[i].center));
    h_val += fit.monopole[i] * std::pow(rho, 2.0 - d.N) +
             fit.dipole[i] * (2.0 - d.N) * dy1 * std::pow(rho, -static_cast<double>(d.N));
  }
  const double kappa = 0.5 * (d.N - 2.0) * (d.N - 2.0) * d.sphere_area;
  out.interaction = kappa * fit.monopole[ball_index] * h_val;
  out.ratio = (out.potential != 0.0) ? out.interaction / out.potential : 0.0;
  return out;
}

BoundaryTermReport boundary_term_estimates(const Field& u, const Ansatz& a,
                                           const PohozaevConfig& cfg,
                                           const std::vector<double>& shifts) {
  const DimensionParams& d = a.dims;
  const double beta = a.potential.beta;
  const Vec2 center = a.bubbles[cfg.ball_index].center;
  BoundaryTermReport rep;
  for (double s : shifts) rep.d_shift = std::max(rep.d_shift, std::abs(s));
  const SphereSamples s = sample_sphere(u, center, cfg.delta, d, cfg.surface_order);

  // F1: leading |y-x_jL|^beta boundary integral of the non-self part
  const Bubble& own = a.bubbles[cfg.ball_index];
  const double f1 = std::abs(a.potential.a) * std::pow(cfg.delta, beta) *
                    surf(s, [&](int i) {
                      const Vec2 p{center.y1 + cfg.delta * std::cos(s.phi[i]),
                                   center.r + cfg.delta * std::sin(s.phi[i])};
                      const Vec2 z{p.y1 - own.center.y1, p.r - own.center.r};
                      const double xi =
                          cutoff_radial(a.cutoff, std::sqrt(z.y1 * z.y1 + z.r * z.r), 0);
                      const double rest = s.uval[i] - xi * eval_bubble(own, d, p);
                      return rest * rest;
                    });
  rep.F1 = f1;

  // common surface factor Int (sum_i U_i)^2 of the F2 budget
  const double g = surf(s, [&](int i) {
    const Vec2 p{center.y1 + cfg.delta * std::cos(s.phi[i]), center.r + cfg.delta * std::sin(s.phi[i])};
    double acc = 0.0;
    for (const auto& b : a.bubbles) {
      const double rho = std::sqrt(dist2(p, b.center));
      acc += std::pow(b.height, 0.5 * (d.N - 2)) * std::pow(1.0 + b.height * rho, -(d.N - 2.0));
    }
    return acc * acc;
  });
  const double dd = rep.d_shift;
  rep.F2_1 = std::pow(dd, beta) * g;
  rep.F2_2 = std::pow(cfg.delta, beta - 1.0) * dd * g;
  rep.F2_3 = cfg.delta * ((dd > 0.0) ? std::pow(dd, beta - 1.0) : 0.0) * g;
  rep.F2_4 = std::pow(cfg.delta, beta + 1.0) * g;
  rep.order_F2_4 = -(d.N - 2.0 + (beta + 4.0 - d.N) * cfg.theta);
  rep.budget_order = -(beta + 2.0);
  return rep;
}

double translation_stress_closure(const std::function<double(const Vec2&)>& u,
                                  const std::function<double(const Vec2&)>& lap_u,
                                  const std::function<void(const Vec2&, double&, double&)>& grad_u,
                                  const Vec2& center, double delta, const DimensionParams& d,
                                  int order) {
  const double omega = transverse_sphere_area(d.N);
  const auto& x = gauss_nodes(order);
  const auto& gw = gauss_weights(order);
  double surfv = 0.0;
  for (int i = 0; i < order; ++i) {
    const double phi = 0.5 * M_PI * (x[i] + 1.0);
    const double w = 0.5 * M_PI * gw[i] * std::pow(std::sin(phi), d.N - 2.0);
    const Vec2 p{center.y1 + delta * std::cos(phi), center.r + delta * std::sin(phi)};
    double g1, gr;
    grad_u(p, g1, gr);
    const double unu = g1 * std::cos(phi) + gr * std::sin(phi);
    surfv += w * (unu * g1 - 0.5 * (g1 * g1 + gr * gr) * std::cos(phi));
  }
  surfv *= omega * std::pow(delta, d.N - 1.0);
  auto volq = ball_integral(
      [&](const Vec2& p) {
        double g1, gr;
        grad_u(p, g1, gr);
        (void)u;
        return lap_u(p) * g1;
      },
      center, delta, d, 24, order, 0.0);
  const double scale = std::max({std::abs(surfv), std::abs(volq.value), 1e-300});
  return std::abs(surfv - volq.value) / scale;
}

std::string pohozaev_to_json(const PohozaevReport& translation, const PohozaevReport& dilation,
                             const BoundaryTermReport& fterms, const PohozaevConfig& cfg) {
  nlohmann::ordered_json j;
  j["theta"] = cfg.theta;
  j["delta"] = cfg.delta;
  j["ball_index"] = cfg.ball_index;
  auto dump = [&](const PohozaevReport& r) {
    nlohmann::ordered_json o;
    for (const auto& t : r.terms)
      o["terms"].push_back(
          {{"name", t.name}, {"value", t.value}, {"predicted_order", t.predicted_order}});
    o["lhs_total"] = r.lhs_total;
    o["rhs"] = r.rhs;
    o["residual"] = r.residual;
    if (r.interaction_term != 0.0 || r.potential_term != 0.0) {
      o["interaction_term"] = r.interaction_term;
      o["potential_term"] = r.potential_term;
    }
    return o;
  };
  j["translation"] = dump(translation);
  j["dilation"] = dump(dilation);
  j["boundary_terms"] = {{"d_shift", fterms.d_shift}, {"F1", fterms.F1},
                         {"F2_1", fterms.F2_1},       {"F2_2", fterms.F2_2},
                         {"F2_3", fterms.F2_3},       {"F2_4", fterms.F2_4},
                         {"order_F2_4", fterms.order_F2_4},
                         {"budget_order", fterms.budget_order}};
  return j.dump(2);
}

}  // namespace bubblelab
