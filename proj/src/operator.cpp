#include "bubblelab/operator.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>
#include <stdexcept>

#include "bubblelab/profile.hpp"
#include "bubblelab/quadrature.hpp"

namespace bubblelab {

namespace {

struct StencilY {
  long im = 0, ip = 0;
  double cm = 0, c0 = 0, cp = 0;  // second-derivative weights
};

StencilY y_stencil(const AxiGrid& g, long i) {
  const long n1 = static_cast<long>(g.n1());
  StencilY s;
  s.im = i - 1;
  s.ip = i + 1;
  double hm, hp;
  if (g.periodic_y1) {
    const double wrap = g.period - (g.y1.back() - g.y1.front());
    s.im = (i == 0) ? n1 - 1 : i - 1;
    s.ip = (i == n1 - 1) ? 0 : i + 1;
    hm = (i == 0) ? wrap : g.y1[i] - g.y1[i - 1];
    hp = (i == n1 - 1) ? wrap : g.y1[i + 1] - g.y1[i];
  } else {
    hm = g.y1[i] - g.y1[i - 1];
    hp = g.y1[i + 1] - g.y1[i];
  }
  s.cm = 2.0 / (hm * (hm + hp));
  s.cp = 2.0 / (hp * (hm + hp));
  s.c0 = -2.0 / (hm * hp);
  return s;
}

}  // namespace

Field discrete_neg_laplacian(const Field& u, int N) {
  const AxiGrid& g = *u.grid;
  Field out(u.grid);
  const long n1 = static_cast<long>(g.n1()), nr = static_cast<long>(g.nr());
  const long i_lo = g.periodic_y1 ? 0 : 1;
  const long i_hi = g.periodic_y1 ? n1 - 1 : n1 - 2;
  for (long i = i_lo; i <= i_hi; ++i) {
    const StencilY sy = y_stencil(g, i);
    for (long j = 0; j <= nr - 2; ++j) {
      double lap = sy.cm * u.at(sy.im, j) + sy.c0 * u.at(i, j) + sy.cp * u.at(sy.ip, j);
      if (j == 0) {
        const double h1 = g.r[1] - g.r[0];
        lap += (N - 1.0) * 2.0 * (u.at(i, 1) - u.at(i, 0)) / (h1 * h1);
      } else {
        const double hm = g.r[j] - g.r[j - 1];
        const double hp = g.r[j + 1] - g.r[j];
        const double cm = 2.0 / (hm * (hm + hp));
        const double cp = 2.0 / (hp * (hm + hp));
        const double c0 = -2.0 / (hm * hp);
        const double dm = -hp / (hm * (hm + hp));
        const double dp = hm / (hp * (hm + hp));
        const double d0 = (hp - hm) / (hm * hp);
        const double fac = (N - 2.0) / g.r[j];
        lap += (cm + fac * dm) * u.at(i, j - 1) + (c0 + fac * d0) * u.at(i, j) +
               (cp + fac * dp) * u.at(i, j + 1);
      }
      out.at(i, j) = -lap;
    }
  }
  return out;
}

struct LinearizedSystem::Impl {
  Ansatz ansatz;
  std::shared_ptr<const AxiGrid> grid;
  std::vector<ConstraintMode> modes;
  std::vector<long> unknown_of_node;  // -1 for Dirichlet nodes
  std::vector<std::size_t> node_of_unknown;
  Eigen::SparseMatrix<double> M;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  std::vector<std::vector<double>> gk;  // multiplier functions at nodes
  std::vector<std::vector<double>> bk;  // quadrature-weighted constraint rows
  LinearSolveStats stats;
};

LinearizedSystem::~LinearizedSystem() = default;
LinearizedSystem::LinearizedSystem(LinearizedSystem&&) noexcept = default;
LinearizedSystem& LinearizedSystem::operator=(LinearizedSystem&&) noexcept = default;

LinearizedSystem::LinearizedSystem(const Ansatz& a, std::shared_ptr<const AxiGrid> grid)
    : impl_(std::make_unique<Impl>()) {
  Impl& im = *impl_;
  im.ansatz = a;
  im.grid = std::move(grid);
  const AxiGrid& g = *im.grid;
  const long n1 = static_cast<long>(g.n1()), nr = static_cast<long>(g.nr());
  const int N = a.dims.N;
  const double p_lin = a.dims.two_star - 2.0;

  for (std::size_t bix = 0; bix < a.bubbles.size(); ++bix) {
    im.modes.push_back({static_cast<int>(bix), ConstraintMode::dilation});
    im.modes.push_back({static_cast<int>(bix), ConstraintMode::translation_y1});
  }

  im.unknown_of_node.assign(g.size(), -1);
  const long i_lo = g.periodic_y1 ? 0 : 1;
  const long i_hi = g.periodic_y1 ? n1 - 1 : n1 - 2;
  for (long i = i_lo; i <= i_hi; ++i)
    for (long j = 0; j <= nr - 2; ++j) {
      im.unknown_of_node[g.idx(i, j)] = static_cast<long>(im.node_of_unknown.size());
      im.node_of_unknown.push_back(g.idx(i, j));
    }
  const long nU = static_cast<long>(im.node_of_unknown.size());
  const long nC = static_cast<long>(im.modes.size());

  // multiplier functions and constraint rows
  const double omega_t = transverse_sphere_area(N);
  im.gk.assign(nC, std::vector<double>(g.size(), 0.0));
  im.bk.assign(nC, std::vector<double>(g.size(), 0.0));
  for (long k = 0; k < nC; ++k) {
    const auto& mode = im.modes[k];
    const Bubble& b = a.bubbles[mode.bubble];
    const int zj = (mode.kind == ConstraintMode::dilation) ? N + 1 : 1;
    for (long i = 0; i < n1; ++i) {
      if (std::abs(g.y1[i] - b.center.y1) >= a.cutoff.outer_radius) continue;
      for (long j = 0; j < nr; ++j) {
        const Vec2 y = g.node(i, j);
        const double s = std::sqrt(dist2(y, b.center));
        const double xi = cutoff_radial(a.cutoff, s, 0);
        if (xi == 0.0) continue;
        const double wpow = std::pow(xi, p_lin) * eval_bubble_power(b, a.dims, y, p_lin);
        const double z = eval_Zij(a, mode.bubble, zj, y);
        const double val = wpow * z;
        im.gk[k][g.idx(i, j)] = val;
        im.bk[k][g.idx(i, j)] = val * g.wy1[i] * g.wr[j] * omega_t * std::pow(g.r[j], N - 2.0);
      }
    }
  }

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(nU) * 6 + static_cast<std::size_t>(nC) * nU / 4);

  for (long u = 0; u < nU; ++u) {
    const std::size_t node = im.node_of_unknown[u];
    const long i = static_cast<long>(node / g.nr());
    const long j = static_cast<long>(node % g.nr());
    const Vec2 y = g.node(i, j);
    const StencilY sy = y_stencil(g, i);
    double diag = 0.0;
    auto add = [&](long ii, long jj, double w) {
      if (w == 0.0) return;
      const long uu = im.unknown_of_node[g.idx(ii, jj)];
      if (uu >= 0) trips.emplace_back(u, uu, -w);  // -Lap contribution
    };
    // y1 part
    add(sy.im, j, sy.cm);
    add(sy.ip, j, sy.cp);
    diag += sy.c0;
    // r part
    if (j == 0) {
      const double h1 = g.r[1] - g.r[0];
      add(i, 1, (N - 1.0) * 2.0 / (h1 * h1));
      diag += -(N - 1.0) * 2.0 / (h1 * h1);
    } else {
      const double hm = g.r[j] - g.r[j - 1];
      const double hp = g.r[j + 1] - g.r[j];
      const double cm = 2.0 / (hm * (hm + hp));
      const double cp = 2.0 / (hp * (hm + hp));
      const double c0 = -2.0 / (hm * hp);
      const double dm = -hp / (hm * (hm + hp));
      const double dp = hm / (hp * (hm + hp));
      const double d0 = (hp - hm) / (hm * hp);
      const double fac = (N - 2.0) / g.r[j];
      add(i, j - 1, cm + fac * dm);
      add(i, j + 1, cp + fac * dp);
      diag += c0 + fac * d0;
    }
    // -Lap sign for the diagonal, then potential and linearization
    double coef = -diag + eval_Q(a.potential, y);
    const double w = eval_W(a, y);
    if (w > 0.0) coef -= (a.dims.two_star - 1.0) * std::pow(w, p_lin);
    trips.emplace_back(u, u, coef);
    // multiplier columns
    for (long k = 0; k < nC; ++k) {
      const double gval = im.gk[k][node];
      if (gval != 0.0) trips.emplace_back(u, nU + k, -gval);
    }
  }
  // constraint rows
  for (long k = 0; k < nC; ++k)
    for (long u = 0; u < nU; ++u) {
      const double bval = im.bk[k][im.node_of_unknown[u]];
      if (bval != 0.0) trips.emplace_back(nU + k, u, bval);
    }

  im.M.resize(nU + nC, nU + nC);
  im.M.setFromTriplets(trips.begin(), trips.end());
  im.M.makeCompressed();
  im.lu.compute(im.M);
  if (im.lu.info() != Eigen::Success) {
    im.stats.singular = true;
    throw std::runtime_error("LinearizedSystem: saddle factorization failed (singular system)");
  }
  im.stats.factor_nonzeros = static_cast<int>(im.M.nonZeros());
}

const std::vector<ConstraintMode>& LinearizedSystem::modes() const { return impl_->modes; }
const Ansatz& LinearizedSystem::ansatz() const { return impl_->ansatz; }
const std::shared_ptr<const AxiGrid>& LinearizedSystem::grid() const { return impl_->grid; }
const LinearSolveStats& LinearizedSystem::stats() const { return impl_->stats; }

std::pair<Field, std::vector<double>> LinearizedSystem::solve(const Field& h) const {
  const Impl& im = *impl_;
  const long nU = static_cast<long>(im.node_of_unknown.size());
  const long nC = static_cast<long>(im.modes.size());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nU + nC);
  for (long u = 0; u < nU; ++u) rhs[u] = h.v[im.node_of_unknown[u]];
  Eigen::VectorXd x = im.lu.solve(rhs);
  if (im.lu.info() != Eigen::Success)
    throw std::runtime_error("LinearizedSystem::solve: backsolve failed");
  Field phi(im.grid);
  for (long u = 0; u < nU; ++u) phi.v[im.node_of_unknown[u]] = x[u];
  std::vector<double> c(nC);
  for (long k = 0; k < nC; ++k) c[k] = x[nU + k];
  return {std::move(phi), std::move(c)};
}

double LinearizedSystem::constraint_residual(const Field& phi) const {
  const Impl& im = *impl_;
  double worst = 0.0;
  for (std::size_t k = 0; k < im.modes.size(); ++k) {
    double acc = 0.0, scale = 0.0;
    for (std::size_t n = 0; n < phi.v.size(); ++n) {
      acc += im.bk[k][n] * phi.v[n];
      scale += std::abs(im.bk[k][n]);
    }
    if (scale > 0.0) worst = std::max(worst, std::abs(acc) / scale);
  }
  return worst;
}

}  // namespace bubblelab
