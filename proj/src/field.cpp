#include "bubblelab/field.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "bubblelab/profile.hpp"
#include "bubblelab/simd/kernels.hpp"

namespace bubblelab {

namespace {

struct Density {
  const AxisSpec* spec;
  double base;

  double cdf(double y) const {
    double acc = base * (y - spec->lo);
    for (const auto& c : spec->clusters) {
      const double s = std::max(0.0, 1.0 / c.h - base);
      acc += s * c.width *
             (std::atan((y - c.center) / c.width) - std::atan((spec->lo - c.center) / c.width));
    }
    return acc;
  }
  double pdf(double y) const {
    double acc = base;
    for (const auto& c : spec->clusters) {
      const double s = std::max(0.0, 1.0 / c.h - base);
      const double t = (y - c.center) / c.width;
      acc += s / (1.0 + t * t);
    }
    return acc;
  }
};

}  // namespace

std::vector<double> build_graded_axis(const AxisSpec& spec) {
  if (!(spec.hi > spec.lo)) throw std::invalid_argument("AxisSpec: hi > lo required");
  Density den{&spec, 1.0 / spec.h_base};
  const double total = den.cdf(spec.hi);
  const int n = std::max(8, static_cast<int>(std::ceil(total)));
  std::vector<double> nodes(n + 1);
  nodes[0] = spec.lo;
  nodes[n] = spec.hi;
  for (int i = 1; i < n; ++i) {
    const double target = total * i / n;
    double lo = spec.lo, hi = spec.hi;
    double y = nodes[i - 1];
    for (int it = 0; it < 100; ++it) {
      const double f = den.cdf(y) - target;
      if (std::abs(f) < 1e-12 * total) break;
      if (f > 0.0)
        hi = y;
      else
        lo = y;
      double ynew = y - f / den.pdf(y);
      if (!(ynew > lo && ynew < hi)) ynew = 0.5 * (lo + hi);
      if (ynew == y) break;
      y = ynew;
    }
    nodes[i] = y;
  }
  return nodes;
}

void AxiGrid::finalize() {
  const std::size_t m1 = y1.size(), mr = r.size();
  wy1.assign(m1, 0.0);
  wr.assign(mr, 0.0);
  for (std::size_t i = 0; i + 1 < m1; ++i) {
    const double h = y1[i + 1] - y1[i];
    wy1[i] += 0.5 * h;
    wy1[i + 1] += 0.5 * h;
  }
  if (periodic_y1) {
    const double h = period - (y1.back() - y1.front());
    wy1.front() += 0.5 * h;
    wy1.back() += 0.5 * h;
  }
  for (std::size_t j = 0; j + 1 < mr; ++j) {
    const double h = r[j + 1] - r[j];
    wr[j] += 0.5 * h;
    wr[j + 1] += 0.5 * h;
  }
}

std::shared_ptr<const AxiGrid> AxiGrid::tensor(const AxisSpec& axis_y1, const AxisSpec& axis_r) {
  auto g = std::make_shared<AxiGrid>();
  g->y1 = build_graded_axis(axis_y1);
  g->r = build_graded_axis(axis_r);
  g->finalize();
  return g;
}

std::shared_ptr<const AxiGrid> AxiGrid::periodic_tensor(const AxisSpec& axis_one_period,
                                                        int periods, const AxisSpec& axis_r) {
  if (periods < 1) throw std::invalid_argument("periodic_tensor: periods >= 1");
  auto base = build_graded_axis(axis_one_period);
  base.pop_back();  // right edge identifies with the next period's left edge
  const double P = axis_one_period.hi - axis_one_period.lo;
  auto g = std::make_shared<AxiGrid>();
  for (int k = 0; k < periods; ++k)
    for (double y : base) g->y1.push_back(y + k * P);
  g->r = build_graded_axis(axis_r);
  g->periodic_y1 = true;
  g->period = P * periods;
  g->finalize();
  return g;
}

namespace {

// index of the last node <= x (clamped into [0, n-2])
std::size_t bracket(const std::vector<double>& xs, double x) {
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = (it == xs.begin()) ? 0 : static_cast<std::size_t>(it - xs.begin() - 1);
  if (i + 1 >= xs.size()) i = xs.size() - 2;
  return i;
}

// Dense least-squares fit of a bicubic over a 4x4 stencil; returns the
// polynomial coefficients in centered, scaled local coordinates.
struct CubicFit {
  double coef[10];
  double x0, y0, sx, sy;
};

void cubic_basis(double x, double y, double* b) {
  b[0] = 1.0;
  b[1] = x;
  b[2] = y;
  b[3] = x * x;
  b[4] = x * y;
  b[5] = y * y;
  b[6] = x * x * x;
  b[7] = x * x * y;
  b[8] = x * y * y;
  b[9] = y * y * y;
}

bool solve_spd(double A[10][10], double rhs[10], double* out) {
  // Gaussian elimination with partial pivoting on the normal equations
  for (int c = 0; c < 10; ++c) {
    int best = c;
    for (int rr = c + 1; rr < 10; ++rr)
      if (std::abs(A[rr][c]) > std::abs(A[best][c])) best = rr;
    if (std::abs(A[best][c]) < 1e-300) return false;
    if (best != c) {
      for (int k = 0; k < 10; ++k) std::swap(A[c][k], A[best][k]);
      std::swap(rhs[c], rhs[best]);
    }
    for (int rr = c + 1; rr < 10; ++rr) {
      const double f = A[rr][c] / A[c][c];
      if (f == 0.0) continue;
      for (int k = c; k < 10; ++k) A[rr][k] -= f * A[c][k];
      rhs[rr] -= f * rhs[c];
    }
  }
  for (int c = 9; c >= 0; --c) {
    double s = rhs[c];
    for (int k = c + 1; k < 10; ++k) s -= A[c][k] * out[k];
    out[c] = s / A[c][c];
  }
  return true;
}

}  // namespace

static CubicFit fit_cubic(const Field& f, const Vec2& p) {
  const AxiGrid& g = *f.grid;
  const auto n1 = static_cast<long>(g.n1()), nr = static_cast<long>(g.nr());
  double rq = std::abs(p.r);
  const long i0 = static_cast<long>(bracket(g.y1, p.y1));
  const long j0 = static_cast<long>(bracket(g.r, rq));

  CubicFit fit;
  fit.x0 = p.y1;
  fit.y0 = rq;
  // stencil rows i0-1..i0+2, columns j0-1..j0+2 with reflection/wrap
  double A[10][10] = {};
  double rhs[10] = {};
  double span_x = 0.0, span_y = 0.0;
  long is[4], js[4];
  for (int k = 0; k < 4; ++k) {
    is[k] = i0 - 1 + k;
    js[k] = j0 - 1 + k;
  }
  if (!g.periodic_y1) {
    long shift = 0;
    if (is[0] < 0) shift = -is[0];
    if (is[3] > n1 - 1) shift = n1 - 1 - is[3];
    for (auto& i : is) i += shift;
  }
  {
    // keep four distinct r-levels: shift inside at both ends (a reflected
    // stencil would duplicate levels and lose rank in the cubic basis)
    long shift = 0;
    if (js[0] < 0) shift = -js[0];
    if (js[3] > nr - 1) shift = nr - 1 - js[3];
    for (auto& j : js) j += shift;
  }
  span_x = 1.0;
  span_y = 1.0;
  // scale by local spacing for conditioning
  {
    const long ia = std::max<long>(0, std::min<long>(is[1], n1 - 2));
    span_x = g.y1[ia + 1] - g.y1[ia];
    const long ja = std::max<long>(0, std::min<long>(js[1], nr - 2));
    span_y = g.r[ja + 1] - g.r[ja];
  }
  fit.sx = 1.0 / span_x;
  fit.sy = 1.0 / span_y;

  for (long ii : is) {
    long iw = ii;
    double xshift = 0.0;
    if (g.periodic_y1) {
      while (iw < 0) {
        iw += n1;
        xshift -= g.period;
      }
      while (iw >= n1) {
        iw -= n1;
        xshift += g.period;
      }
    }
    for (long jj : js) {
      const long jw = jj;
      const double x = (g.y1[iw] + xshift - fit.x0) * fit.sx;
      const double y = (g.r[jw] - fit.y0) * fit.sy;
      double b[10];
      cubic_basis(x, y, b);
      const double val = f.at(static_cast<std::size_t>(iw), static_cast<std::size_t>(jw));
      for (int a = 0; a < 10; ++a) {
        rhs[a] += b[a] * val;
        for (int b2 = 0; b2 < 10; ++b2) A[a][b2] += b[a] * b[b2];
      }
    }
  }
  if (!solve_spd(A, rhs, fit.coef)) throw std::runtime_error("Field::sample: degenerate stencil");
  return fit;
}

double Field::sample(const Vec2& p, int order) const {
  const AxiGrid& g = *grid;
  double rq = std::abs(p.r);
  if (order <= 1) {
    const std::size_t i = bracket(g.y1, p.y1);
    const std::size_t j = bracket(g.r, rq);
    const double tx = (p.y1 - g.y1[i]) / (g.y1[i + 1] - g.y1[i]);
    const double ty = (rq - g.r[j]) / (g.r[j + 1] - g.r[j]);
    return (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(i + 1, j) +
           (1 - tx) * ty * at(i, j + 1) + tx * ty * at(i + 1, j + 1);
  }
  const CubicFit fit = fit_cubic(*this, {p.y1, rq});
  return fit.coef[0];
}

void Field::sample_gradient(const Vec2& p, double& value, double& d_y1, double& d_r) const {
  const double rq = std::abs(p.r);
  const CubicFit fit = fit_cubic(*this, {p.y1, rq});
  value = fit.coef[0];
  d_y1 = fit.coef[1] * fit.sx;
  d_r = fit.coef[2] * fit.sy;
  if (p.r < 0.0) d_r = -d_r;
}

Field field_from(const std::shared_ptr<const AxiGrid>& g,
                 const std::function<double(const Vec2&)>& f) {
  Field out(g);
  for (std::size_t i = 0; i < g->n1(); ++i)
    for (std::size_t j = 0; j < g->nr(); ++j) out.at(i, j) = f(g->node(i, j));
  return out;
}

Field field_W(const Ansatz& a, const std::shared_ptr<const AxiGrid>& g) {
  // cutoff support never spans periods at the spacings we admit, so the batch
  // kernel path evaluates each bubble over its support box directly
  Field out(g);
  const int N = a.dims.N;
  const double h2 = static_cast<double>(N - 2);  // exponent 2h = N-2 (k parameter)
  std::vector<double> rho2;
  for (std::size_t i = 0; i < g->n1(); ++i) {
    for (const auto& b : a.bubbles) {
      const double dy = g->y1[i] - b.center.y1;
      if (std::abs(dy) >= a.cutoff.outer_radius) continue;
      rho2.resize(g->nr());
      for (std::size_t j = 0; j < g->nr(); ++j) {
        const double dr = g->r[j] - b.center.r;
        rho2[j] = dy * dy + dr * dr;
      }
      const double coef = a.dims.bubble_amp * std::pow(b.height, 0.5 * (N - 2));
      // accumulate xi * U; xi applied nodewise after the batch power
      std::vector<double> row(g->nr(), 0.0);
      simd::pow_ratio_accumulate(rho2.data(), row.data(), g->nr(), coef,
                                 b.height * b.height, static_cast<int>(h2));
      for (std::size_t j = 0; j < g->nr(); ++j) {
        const double s = std::sqrt(rho2[j]);
        const double xi = cutoff_radial(a.cutoff, s, 0);
        if (xi != 0.0) out.at(i, j) += xi * row[j];
      }
    }
  }
  return out;
}

namespace {

double norm_generic(const Field& f, const Ansatz& a, const WeightedNormParams& p, bool dstar) {
  if (f.v.empty()) throw std::invalid_argument("norm: empty field");
  double best = 0.0;
  const AxiGrid& g = *f.grid;
  for (std::size_t i = 0; i < g.n1(); ++i)
    for (std::size_t j = 0; j < g.nr(); ++j) {
      const Vec2 y = g.node(i, j);
      const double w = dstar ? dstar_weight(a, p, y) : star_weight(a, p, y);
      const double ratio = std::abs(f.at(i, j)) / w;
      if (ratio > best) best = ratio;
    }
  return best;
}

}  // namespace

double norm_star(const Field& f, const Ansatz& a, const WeightedNormParams& p) {
  return norm_generic(f, a, p, false);
}

double norm_dstar(const Field& f, const Ansatz& a, const WeightedNormParams& p) {
  return norm_generic(f, a, p, true);
}

std::shared_ptr<const AxiGrid> make_solver_grid(const Ansatz& a, const GridBuildOptions& opt) {
  double lo = a.bubbles.front().center.y1, hi = lo;
  double mu_max = 0.0;
  for (const auto& b : a.bubbles) {
    lo = std::min(lo, b.center.y1);
    hi = std::max(hi, b.center.y1);
    mu_max = std::max(mu_max, b.height);
  }
  AxisSpec ay;
  ay.lo = lo - a.cutoff.outer_radius - opt.margin;
  ay.hi = hi + a.cutoff.outer_radius + opt.margin;
  ay.h_base = opt.h_base;
  for (const auto& b : a.bubbles) {
    GridCluster c;
    c.center = b.center.y1;
    c.h = 1.0 / (opt.core_nodes * b.height);
    c.width = opt.core_width_factor / b.height;
    ay.clusters.push_back(c);
  }
  AxisSpec ar;
  ar.lo = 0.0;
  ar.hi = opt.r_extent;
  ar.h_base = opt.h_base;
  ar.clusters.push_back({0.0, 1.0 / (opt.core_nodes * mu_max), opt.core_width_factor / mu_max});
  return AxiGrid::tensor(ay, ar);
}

}  // namespace bubblelab
