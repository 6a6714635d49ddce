#include "bubblelab/diagnostics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bubblelab/profile.hpp"
#include "bubblelab/quadrature.hpp"

namespace bubblelab {

DifferenceQuotient make_difference(const Field& u1, const Field& u2, const Ansatz& a,
                                   const WeightedNormParams& np, double floor) {
  const bool same_nodes = u1.grid == u2.grid ||
                          (u1.grid->y1 == u2.grid->y1 && u1.grid->r == u2.grid->r);
  if (!same_nodes) throw std::invalid_argument("make_difference: fields must share one grid");
  DifferenceQuotient out;
  out.eta = Field(u1.grid);
  for (std::size_t n = 0; n < u1.v.size(); ++n) out.eta.v[n] = u1.v[n] - u2.v[n];
  out.raw_norm = norm_star(out.eta, a, np);
  if (out.raw_norm <= floor) {
    out.identical = true;
    std::fill(out.eta.v.begin(), out.eta.v.end(), 0.0);
    return out;
  }
  for (auto& v : out.eta.v) v /= out.raw_norm;
  return out;
}

KernelProjection kernel_projection(const Field& eta, const Ansatz& a, int j, double R,
                                   int radial_panels, int nodes) {
  if (j < 0 || j >= static_cast<int>(a.bubbles.size()))
    throw std::invalid_argument("kernel_projection: bubble index");
  const DimensionParams& d = a.dims;
  const Bubble& b = a.bubbles[j];
  const double mu = b.height;
  const double h = 0.5 * (d.N - 2.0);
  const Bubble unit{{0.0, 0.0}, 1.0};

  // rescaled difference around the bubble: eta~(z) = mu^{-h} eta(x_j + z/mu)
  auto eta_resc = [&](const Vec2& z) {
    const Vec2 y{b.center.y1 + z.y1 / mu, b.center.r + z.r / mu};
    return std::pow(mu, -h) * eta.sample(y, 3);
  };
  const double p = d.two_star - 2.0;
  auto weight = [&](const Vec2& z) { return eval_bubble_power(unit, d, z, p); };

  KernelProjection out;
  out.b.assign(d.N + 1, 0.0);
  out.gram_min = INFINITY;
  double eta_norm2 = 0.0;
  {
    auto q = ball_integral(
        [&](const Vec2& z) {
          const double e = eta_resc(z);
          return weight(z) * e * e;
        },
        {0.0, 0.0}, R, d, radial_panels, nodes, 0.0);
    eta_norm2 = q.value;
  }
  double resid2 = eta_norm2;
  for (int l = 0; l <= 1; ++l) {
    // l = 0 dilation, l = 1 axis translation; transverse modes vanish on the
    // axisymmetric subspace and keep zero coefficients
    auto psi = [&](const Vec2& z) { return eval_kernel(unit, d, l, z); };
    auto gram = ball_integral(
        [&](const Vec2& z) {
          const double s = psi(z);
          return weight(z) * s * s;
        },
        {0.0, 0.0}, R, d, radial_panels, nodes, 0.0);
    auto inner = ball_integral(
        [&](const Vec2& z) { return weight(z) * psi(z) * eta_resc(z); }, {0.0, 0.0}, R, d,
        radial_panels, nodes, 0.0);
    if (!(gram.value > 0.0))
      throw std::runtime_error("kernel_projection: degenerate Gram (grid under-resolved)");
    out.gram_min = std::min(out.gram_min, gram.value);
    out.b[l] = inner.value / gram.value;
    resid2 -= out.b[l] * out.b[l] * gram.value;
  }
  out.residual = (eta_norm2 > 0.0) ? std::sqrt(std::max(resid2, 0.0) / eta_norm2) : 0.0;
  return out;
}

double periodicity_check(const Field& u, const Ansatz& a, const WeightedNormParams& np, double L,
                         double window_lo, double window_hi) {
  const AxiGrid& g = *u.grid;
  if (!g.periodic_y1) {
    if (window_lo - L < g.y1.front() || window_hi > g.y1.back())
      throw std::invalid_argument("periodicity_check: window outside field coverage");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < g.n1(); ++i) {
    const double y1 = g.y1[i];
    if (y1 < window_lo || y1 > window_hi) continue;
    double shifted_y1 = y1 - L;
    if (g.periodic_y1) {
      const double lo = g.y1.front();
      shifted_y1 = lo + std::fmod(std::fmod(shifted_y1 - lo, g.period) + g.period, g.period);
    }
    // exact node alignment avoids interpolation noise (tiled periodic grids)
    const auto it = std::lower_bound(g.y1.begin(), g.y1.end(), shifted_y1 - 1e-9);
    long aligned = -1;
    if (it != g.y1.end() && std::abs(*it - shifted_y1) < 1e-9 * (1.0 + std::abs(*it)))
      aligned = it - g.y1.begin();
    for (std::size_t jn = 0; jn < g.nr(); ++jn) {
      const Vec2 y = g.node(i, jn);
      const double other = (aligned >= 0)
                               ? u.at(static_cast<std::size_t>(aligned), jn)
                               : u.sample({shifted_y1, y.r}, 3);
      const double defect = std::abs(other - u.at(i, jn));
      const double w = star_weight(a, np, y);
      worst = std::max(worst, defect / w);
    }
  }
  return worst;
}

GreenTailModel green_tail_fit(const Field& eta, const Ansatz& a, const WeightedNormParams& np,
                              double annulus_inner, double annulus_outer) {
  const DimensionParams& d = a.dims;
  const int nb = static_cast<int>(a.bubbles.size());
  const AxiGrid& g = *eta.grid;
  std::vector<Vec2> pts;
  std::vector<double> vals;
  for (std::size_t i = 0; i < g.n1(); ++i)
    for (std::size_t j = 0; j < g.nr(); ++j) {
      const Vec2 y = g.node(i, j);
      bool in_annulus = false, near_core = false;
      for (const auto& b : a.bubbles) {
        const double rho = std::sqrt(dist2(y, b.center));
        if (rho < annulus_inner) near_core = true;
        if (rho >= annulus_inner && rho <= annulus_outer) in_annulus = true;
      }
      if (in_annulus && !near_core) {
        pts.push_back(y);
        vals.push_back(eta.at(i, j));
      }
    }
  if (pts.size() < static_cast<std::size_t>(2 * nb) + 2)
    throw std::runtime_error("green_tail_fit: annuli carry too few samples");

  Eigen::MatrixXd A(pts.size(), 2 * nb);
  Eigen::VectorXd rhs(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    rhs[static_cast<long>(k)] = vals[k];
    for (int jb = 0; jb < nb; ++jb) {
      const double rho = std::sqrt(dist2(pts[k], a.bubbles[jb].center));
      const double dy1 = pts[k].y1 - a.bubbles[jb].center.y1;
      A(static_cast<long>(k), 2 * jb) = std::pow(rho, 2.0 - d.N);
      A(static_cast<long>(k), 2 * jb + 1) = (2.0 - d.N) * dy1 * std::pow(rho, -static_cast<double>(d.N));
    }
  }
  Eigen::VectorXd coef = A.colPivHouseholderQr().solve(rhs);
  if (!coef.allFinite()) throw std::runtime_error("green_tail_fit: ill-conditioned fit");
  GreenTailModel out;
  out.monopole.resize(nb);
  out.dipole.resize(nb);
  for (int jb = 0; jb < nb; ++jb) {
    out.monopole[jb] = coef[2 * jb];
    out.dipole[jb] = coef[2 * jb + 1];
  }
  const double denom = rhs.norm();
  out.fit_residual = (denom > 0.0) ? (A * coef - rhs).norm() / denom : 0.0;
  double mu_max = 0.0;
  for (const auto& b : a.bubbles) mu_max = std::max(mu_max, b.height);
  out.remainder_scale = std::pow(mu_max, -(0.5 * (d.N + 2.0) - np.vartheta));
  return out;
}

namespace {

double ball_union_integral(const Ansatz& a, const std::function<double(const Vec2&)>& f,
                           int radial_panels, int nodes) {
  double acc = 0.0;
  for (const auto& b : a.bubbles) {
    auto q = ball_integral(f, b.center, a.cutoff.outer_radius, a.dims, radial_panels, nodes,
                           0.25 / b.height);
    acc += q.value;
  }
  return acc;
}

}  // namespace

double energy(const Ansatz& a, int radial_panels, int nodes) {
  const DimensionParams& d = a.dims;
  auto f = [&](const Vec2& y) {
    double g1, gr;
    eval_W_gradient(a, y, g1, gr);
    const double w = eval_W(a, y);
    return 0.5 * (g1 * g1 + gr * gr + eval_Q(a.potential, y) * w * w) -
           std::pow(std::max(w, 0.0), d.two_star) / d.two_star;
  };
  return ball_union_integral(a, f, radial_panels, nodes);
}

double energy_mu_derivative(const Ansatz& a, int radial_panels, int nodes) {
  // dI/dmu = <I'(W), dW/dmu> = -Int l_L sum_j Z_{j,N+1}
  const int N = a.dims.N;
  auto f = [&](const Vec2& y) {
    double z = 0.0;
    for (int j = 0; j < static_cast<int>(a.bubbles.size()); ++j) z += eval_Zij(a, j, N + 1, y);
    return -eval_lL(a, y) * z;
  };
  return ball_union_integral(a, f, radial_panels, nodes);
}

double energy_location_derivative(const Ansatz& a, int bubble, int radial_panels, int nodes) {
  // dI/dx_{i,1} = -Int l_L dW_i/dx_{i,1}; the derivative carries the cutoff
  // motion as well: dW_i/dx_{i,1} = -(d1 xi U + xi d1 U)
  const Bubble& b = a.bubbles[bubble];
  auto f = [&](const Vec2& y) {
    const Vec2 z{y.y1 - b.center.y1, y.r - b.center.r};
    const double s = std::sqrt(z.y1 * z.y1 + z.r * z.r);
    const double xi = cutoff_radial(a.cutoff, s, 0);
    if (xi == 0.0) return 0.0;
    const double xip = cutoff_radial(a.cutoff, s, 1);
    double g1, gr;
    bubble_gradient(b, a.dims, y, g1, gr);
    const double d1xi = (s > 0.0) ? xip * z.y1 / s : 0.0;
    const double dWdx = -(d1xi * eval_bubble(b, a.dims, y) + xi * g1);
    return -eval_lL(a, y) * dWdx;
  };
  auto q = ball_integral(f, b.center, a.cutoff.outer_radius, a.dims, radial_panels, nodes,
                         0.25 / b.height);
  return q.value;
}

}  // namespace bubblelab
