#include "bubblelab/greenfn.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "bubblelab/quadrature.hpp"
#include "bubblelab/simd/kernels.hpp"

namespace bubblelab {

namespace {

struct AngleTable {
  std::vector<double> cosv;
  std::vector<double> w;  // GL weight * sin^{N-3}, normalized to sum 1
};

const AngleTable& angle_table(int N, int nodes) {
  static std::map<std::pair<int, int>, AngleTable> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_pair(N, nodes);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  AngleTable t;
  const auto& x = gauss_nodes(nodes);
  const auto& w = gauss_weights(nodes);
  double total = 0.0;
  t.cosv.resize(nodes);
  t.w.resize(nodes);
  for (int i = 0; i < nodes; ++i) {
    const double alpha = 0.5 * M_PI * (x[i] + 1.0);
    t.cosv[i] = std::cos(alpha);
    t.w[i] = 0.5 * M_PI * w[i] * std::pow(std::sin(alpha), N - 3.0);
    total += t.w[i];
  }
  for (auto& wi : t.w) wi /= total;
  return cache.emplace(key, std::move(t)).first->second;
}

}  // namespace

double ring_green(const DimensionParams& d, const Vec2& target, const Vec2& source,
                  int angle_nodes) {
  const double d1 = target.y1 - source.y1;
  const double A = d1 * d1 + target.r * target.r + source.r * source.r;
  const double B = 2.0 * target.r * source.r;
  const int k = d.N - 2;
  if (B == 0.0) {
    if (A <= 0.0) return 0.0;  // coincident points carry zero ring measure
    return std::pow(A, -0.5 * k);
  }
  const AngleTable& t = angle_table(d.N, angle_nodes);
  return simd::kernel_moment_sum(t.cosv.data(), t.w.data(), t.cosv.size(), A, B, k);
}

namespace {

double cell_contribution(const Field& f, const DimensionParams& d, const Vec2& target,
                         const Vec2& center, double hx, double hy, int levels, int angle_nodes) {
  // refine while the cell is close to the target relative to its own size
  const double dx = target.y1 - center.y1, dy = target.r - center.r;
  const double dist2c = dx * dx + dy * dy;
  const double diam2 = hx * hx + hy * hy;
  if (levels > 0 && dist2c < 4.0 * diam2) {
    double acc = 0.0;
    for (int sx = -1; sx <= 1; sx += 2)
      for (int sy = -1; sy <= 1; sy += 2) {
        Vec2 sub{center.y1 + 0.25 * sx * hx, center.r + 0.25 * sy * hy};
        if (sub.r < 0.0) continue;
        acc += cell_contribution(f, d, target, sub, 0.5 * hx, 0.5 * hy, levels - 1, angle_nodes);
      }
    return acc;
  }
  if (center.r <= 0.0) return 0.0;
  const double mass = f.sample(center, 1) * hx * hy * transverse_sphere_area(d.N) *
                      std::pow(center.r, d.N - 2.0);
  return mass * ring_green(d, target, center, angle_nodes);
}

}  // namespace

std::vector<double> green_convolve(const Field& f, const DimensionParams& d,
                                   const std::vector<Vec2>& targets, const GreenSpec& spec) {
  const AxiGrid& g = *f.grid;
  const double omega_t = transverse_sphere_area(d.N);
  std::vector<double> out(targets.size(), 0.0);
  const std::size_t n1 = g.n1(), nr = g.nr();

  std::vector<double> ring_measure(nr);
  for (std::size_t j = 0; j < nr; ++j)
    ring_measure[j] = g.wr[j] * omega_t * std::pow(g.r[j], d.N - 2.0);

  for (std::size_t tix = 0; tix < targets.size(); ++tix) {
    const Vec2 y = targets[tix];
    double acc = 0.0;
    for (std::size_t i = 0; i < n1; ++i) {
      const double dyc = y.y1 - g.y1[i];
      for (std::size_t j = 0; j < nr; ++j) {
        const double mass = f.at(i, j) * g.wy1[i] * ring_measure[j];
        if (mass == 0.0) continue;
        const double drc = y.r - g.r[j];
        const double d2 = dyc * dyc + drc * drc;
        const double cell2 = g.wy1[i] * g.wy1[i] + g.wr[j] * g.wr[j];
        if (d2 < 4.0 * cell2) {
          // singular/near cell: dyadic quadrant refinement with local sampling
          acc += cell_contribution(f, d, y, g.node(i, j), g.wy1[i], g.wr[j],
                                   spec.singular_levels, spec.angle_nodes);
        } else {
          acc += mass * ring_green(d, y, g.node(i, j), spec.angle_nodes);
        }
      }
    }
    out[tix] = acc * d.green_const;
  }
  return out;
}

}  // namespace bubblelab
