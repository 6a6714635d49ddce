#include "bubblelab/profile.hpp"

#include <cmath>

namespace bubblelab {

namespace {

// logistic; saturates exactly to 0/1 once the argument is far out
inline double logistic(double x) {
  if (x > 40.0) return 1.0;
  if (x < -40.0) return 0.0;
  return 1.0 / (1.0 + std::exp(-x));
}

}  // namespace

double eval_bubble(const Bubble& b, const DimensionParams& d, const Vec2& y) {
  const double mu = b.height;
  const double rho2 = dist2(y, b.center);
  const double base = mu / (1.0 + mu * mu * rho2);
  return d.bubble_amp * std::pow(base, 0.5 * (d.N - 2));
}

double eval_bubble_power(const Bubble& b, const DimensionParams& d, const Vec2& y,
                         double exponent_over_u) {
  const double mu = b.height;
  const double rho2 = dist2(y, b.center);
  const double base = mu / (1.0 + mu * mu * rho2);
  return std::pow(d.bubble_amp, exponent_over_u) *
         std::pow(base, 0.5 * (d.N - 2) * exponent_over_u);
}

void bubble_gradient(const Bubble& b, const DimensionParams& d, const Vec2& y,
                     double& du_dy1, double& du_dr) {
  const double mu = b.height;
  const double rho2 = dist2(y, b.center);
  const double t = 1.0 + mu * mu * rho2;
  // dU/dy_k = -(N-2) A_N mu^{(N+2)/2} (y-x)_k t^{-N/2}
  const double common =
      -(d.N - 2.0) * d.bubble_amp * std::pow(mu, 0.5 * (d.N + 2)) * std::pow(t, -0.5 * d.N);
  du_dy1 = common * (y.y1 - b.center.y1);
  du_dr = common * (y.r - b.center.r);
}

double eval_kernel(const Bubble& b, const DimensionParams& d, int l, const Vec2& y) {
  if (l < 0 || l > d.N) throw std::invalid_argument("eval_kernel: l in 0..N required");
  const double mu = b.height;
  const double rho2 = dist2(y, b.center);
  const double t = 1.0 + mu * mu * rho2;
  if (l == 0) {
    // dU/dmu = (N-2)/2 A_N mu^{(N-4)/2} (1 - mu^2 rho^2) t^{-N/2}
    return 0.5 * (d.N - 2.0) * d.bubble_amp * std::pow(mu, 0.5 * (d.N - 4)) *
           (1.0 - mu * mu * rho2) * std::pow(t, -0.5 * d.N);
  }
  double g1, gr;
  bubble_gradient(b, d, y, g1, gr);
  if (l == 1) return g1;
  // transverse modes: radial factor dU/dr (direction vector implied)
  return gr;
}

double cutoff_radial(const CutoffSpec& c, double s, int order) {
  const double a = c.inner_radius, b = c.outer_radius;
  if (s <= a) return order == 0 ? 1.0 : 0.0;
  if (s >= b) return 0.0;
  const double scale = 1.0 / (b - a);
  const double t = (s - a) * scale;  // in (0,1)
  // xi = 1 - sigma(w), w = 1/(1-t) - 1/t
  const double u = 1.0 / t, v = 1.0 / (1.0 - t);
  const double w = v - u;
  const double sg = logistic(w);
  if (order == 0) return 1.0 - sg;
  const double sp = sg * (1.0 - sg);  // sigma'
  const double wp = v * v + u * u;
  if (order == 1) return -sp * wp * scale;
  const double wpp = 2.0 * (v * v * v - u * u * u);
  const double spp = sp * (1.0 - 2.0 * sg);  // sigma''
  return -(spp * wp * wp + sp * wpp) * scale * scale;
}

double eval_cutoff(const CutoffSpec& c, const DimensionParams& d, const Vec2& z, int order) {
  if (order < 0 || order > 2) throw std::invalid_argument("eval_cutoff: order in 0..2");
  const double s = std::sqrt(z.y1 * z.y1 + z.r * z.r);
  if (order == 0) return cutoff_radial(c, s, 0);
  if (order == 1) return cutoff_radial(c, s, 1);
  // Laplacian of the radial profile in R^N: xi'' + (N-1)/s xi'
  if (s <= c.inner_radius || s >= c.outer_radius) return 0.0;
  return cutoff_radial(c, s, 2) + (d.N - 1.0) / s * cutoff_radial(c, s, 1);
}

namespace {

// Distance from y to the nearest lattice point (jL, 0), j in Z.
inline void lattice_offset(const PotentialSpec& p, const Vec2& y, double& d1, double& dr) {
  const double L = p.period_L;
  d1 = y.y1 - L * std::round(y.y1 / L);
  dr = y.r;
}

}  // namespace

double eval_Q_raw(const PotentialSpec& p, const Vec2& y) {
  double d1, dr;
  lattice_offset(p, y, d1, dr);
  const double dist = std::sqrt(d1 * d1 + dr * dr);
  double q = p.offset;
  if (dist > 0.0) q += p.a * std::pow(dist, p.beta) + p.remainder_scale * std::pow(dist, p.beta + 1.0);
  return q;
}

double eval_Q(const PotentialSpec& p, const Vec2& y) {
  double q = eval_Q_raw(p, y);
  if (p.clip_enabled) {
    // band [0, ceiling] for wells (a >= 0, the standard case); profiles with
    // a < 0 clip into [-ceiling, ceiling] so a positive remainder plateau
    // survives; offset shifts the band
    const double hi = p.offset + p.ceiling();
    const double lo = p.offset + (p.a >= 0.0 ? 0.0 : -p.ceiling());
    if (q > hi) q = hi;
    if (q < lo) q = lo;
  }
  return q;
}

void eval_Q_gradient(const PotentialSpec& p, const Vec2& y, double& dq_dy1, double& dq_dr) {
  double d1, dr;
  lattice_offset(p, y, d1, dr);
  const double dist = std::sqrt(d1 * d1 + dr * dr);
  dq_dy1 = dq_dr = 0.0;
  if (dist == 0.0) return;
  if (p.clip_enabled) {
    const double q = eval_Q_raw(p, y);
    const double hi = p.offset + p.ceiling();
    const double lo = p.offset + (p.a >= 0.0 ? 0.0 : -p.ceiling());
    if (q > hi || q < lo) return;  // flat in the clipped region
  }
  const double radial = p.a * p.beta * std::pow(dist, p.beta - 2.0) +
                        p.remainder_scale * (p.beta + 1.0) * std::pow(dist, p.beta - 1.0);
  dq_dy1 = radial * d1;
  dq_dr = radial * dr;
}

double eval_W(const Ansatz& a, const Vec2& y) {
  double w = 0.0;
  for (const auto& b : a.bubbles) {
    const Vec2 z{y.y1 - b.center.y1, y.r - b.center.r};
    const double xi = eval_cutoff(a.cutoff, a.dims, z, 0);
    if (xi != 0.0) w += xi * eval_bubble(b, a.dims, y);
  }
  return w;
}

void eval_W_gradient(const Ansatz& a, const Vec2& y, double& dw_dy1, double& dw_dr) {
  dw_dy1 = dw_dr = 0.0;
  for (const auto& b : a.bubbles) {
    const Vec2 z{y.y1 - b.center.y1, y.r - b.center.r};
    const double s = std::sqrt(z.y1 * z.y1 + z.r * z.r);
    const double xi = cutoff_radial(a.cutoff, s, 0);
    if (xi == 0.0) continue;
    double g1, gr;
    bubble_gradient(b, a.dims, y, g1, gr);
    const double u = eval_bubble(b, a.dims, y);
    const double xip = cutoff_radial(a.cutoff, s, 1);
    double n1 = 0.0, nr = 0.0;
    if (s > 0.0) {
      n1 = z.y1 / s;
      nr = z.r / s;
    }
    dw_dy1 += xi * g1 + xip * n1 * u;
    dw_dr += xi * gr + xip * nr * u;
  }
}

double eval_Zij(const Ansatz& a, int i, int j, const Vec2& y) {
  const int N = a.dims.N;
  if (i < 0 || i >= static_cast<int>(a.bubbles.size()))
    throw std::invalid_argument("eval_Zij: bubble index out of range");
  if (j < 1 || j > N + 1) throw std::invalid_argument("eval_Zij: j in 1..N+1 required");
  const Bubble& b = a.bubbles[i];
  const Vec2 z{y.y1 - b.center.y1, y.r - b.center.r};
  const double s = std::sqrt(z.y1 * z.y1 + z.r * z.r);
  const double xi = cutoff_radial(a.cutoff, s, 0);
  if (xi == 0.0) return 0.0;
  if (j == N + 1) return xi * eval_kernel(b, a.dims, 0, y);
  // translation: Z_ij = -xi (dxi/dy_j U + xi dU/dy_j); sign fixed so that
  // Z_ij = d/dx_{i,j} [xi W_i] matches the finite difference of eval_W.
  const double u = eval_bubble(b, a.dims, y);
  const double xip = cutoff_radial(a.cutoff, s, 1);
  double g1, gr;
  bubble_gradient(b, a.dims, y, g1, gr);
  const double comp_z = (j == 1) ? z.y1 : z.r;
  const double comp_g = (j == 1) ? g1 : gr;
  const double dxi = (s > 0.0) ? xip * comp_z / s : 0.0;
  return -xi * (dxi * u + xi * comp_g);
}

double eval_lL(const Ansatz& a, const Vec2& y) {
  const double p = a.dims.two_star - 1.0;
  double w = 0.0, sum_cut_pow = 0.0, edge = 0.0;
  for (const auto& b : a.bubbles) {
    const Vec2 z{y.y1 - b.center.y1, y.r - b.center.r};
    const double s = std::sqrt(z.y1 * z.y1 + z.r * z.r);
    const double xi = cutoff_radial(a.cutoff, s, 0);
    if (xi == 0.0) continue;
    const double u = eval_bubble(b, a.dims, y);
    w += xi * u;
    // same pow pipeline as the W-term so single-bubble plateaus cancel exactly
    sum_cut_pow += xi * std::pow(u, p);
    const double lap_xi = (s > a.cutoff.inner_radius && s < a.cutoff.outer_radius)
                              ? cutoff_radial(a.cutoff, s, 2) +
                                    (a.dims.N - 1.0) / s * cutoff_radial(a.cutoff, s, 1)
                              : 0.0;
    const double xip = cutoff_radial(a.cutoff, s, 1);
    if (lap_xi != 0.0 || xip != 0.0) {
      double g1, gr;
      bubble_gradient(b, a.dims, y, g1, gr);
      const double grad_dot = (s > 0.0) ? xip * (z.y1 * g1 + z.r * gr) / s : 0.0;
      edge += u * lap_xi + 2.0 * grad_dot;
    }
  }
  const double w_pow = (w > 0.0) ? std::pow(w, p) : 0.0;
  return (w_pow - sum_cut_pow) - eval_Q(a.potential, y) * w + edge;
}

namespace {

double weight_sum(const Ansatz& a, double half_exp, double tau, const Vec2& y) {
  double sum = 0.0;
  for (const auto& b : a.bubbles) {
    const double mu = b.height;
    const double rho = std::sqrt(dist2(y, b.center));
    sum += std::pow(mu, half_exp) * std::pow(1.0 + mu * rho, -(half_exp + tau));
  }
  return sum;
}

}  // namespace

double star_weight(const Ansatz& a, const WeightedNormParams& p, const Vec2& y) {
  return weight_sum(a, 0.5 * (a.dims.N - 2), p.tau, y);
}

double dstar_weight(const Ansatz& a, const WeightedNormParams& p, const Vec2& y) {
  return weight_sum(a, 0.5 * (a.dims.N + 2), p.tau, y);
}

}  // namespace bubblelab
