#include "bubblelab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace bubblelab {

namespace {

struct GaussRule {
  std::vector<double> x, w;
};

// Newton iteration on Legendre P_n; standard construction.
GaussRule make_gauss(int n) {
  GaussRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    rule.x[i] = -z;
    rule.x[n - 1 - i] = z;
    rule.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.w[n - 1 - i] = rule.w[i];
  }
  return rule;
}

const GaussRule& cached_gauss(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss(n)).first;
  return it->second;
}

double panel_gauss(const std::function<double(double)>& g, double a, double b, int n) {
  const GaussRule& rule = cached_gauss(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += rule.w[i] * g(mid + half * rule.x[i]);
  return acc * half;
}

}  // namespace

const std::vector<double>& gauss_nodes(int n) { return cached_gauss(n).x; }
const std::vector<double>& gauss_weights(int n) { return cached_gauss(n).w; }

namespace {

// Integrate g over [0,1) panels after mapping r = scale * t/(1-t).
double mapped_radial(const std::function<double(double)>& f, const DimensionParams& d,
                     const QuadratureSpec& spec, int nodes, int panels) {
  const double S = spec.scale;
  auto g = [&](double t) {
    const double om = 1.0 - t;
    const double r = S * t / om;
    const double jac = S / (om * om);
    return std::pow(r, d.N - 1.0) * f(r) * jac;
  };
  // panel splits in t; include images of the user breakpoints
  std::vector<double> splits{0.0};
  for (double rb : spec.breakpoints)
    if (rb > 0.0) splits.push_back(rb / (S + rb));
  for (int i = 1; i < panels; ++i) splits.push_back(static_cast<double>(i) / panels);
  splits.push_back(1.0 - 1e-12);
  std::sort(splits.begin(), splits.end());
  splits.erase(std::unique(splits.begin(), splits.end()), splits.end());
  double acc = 0.0;
  for (size_t i = 0; i + 1 < splits.size(); ++i)
    acc += panel_gauss(g, splits[i], splits[i + 1], nodes);
  return acc * d.sphere_area;
}

}  // namespace

QuadResult radial_integral(const std::function<double(double)>& f, const DimensionParams& d,
                           const QuadratureSpec& spec) {
  spec.validate();
  const double coarse = mapped_radial(f, d, spec, spec.nodes, spec.panels);
  const double fine = mapped_radial(f, d, spec, spec.nodes + spec.nodes / 2, 2 * spec.panels);
  QuadResult res;
  res.value = fine;
  res.error = std::abs(fine - coarse);
  res.converged = res.error <= spec.tol * (std::abs(fine) + 1.0);
  return res;
}

QuadResult radial_integral_range(const std::function<double(double)>& f,
                                 const DimensionParams& d, double r0, double r1,
                                 const QuadratureSpec& spec) {
  spec.validate();
  auto g = [&](double r) { return std::pow(r, d.N - 1.0) * f(r); };
  auto run = [&](int nodes, int panels) {
    std::vector<double> splits{r0};
    for (double rb : spec.breakpoints)
      if (rb > r0 && rb < r1) splits.push_back(rb);
    for (int i = 1; i < panels; ++i) splits.push_back(r0 + (r1 - r0) * i / panels);
    splits.push_back(r1);
    std::sort(splits.begin(), splits.end());
    splits.erase(std::unique(splits.begin(), splits.end()), splits.end());
    double acc = 0.0;
    for (size_t i = 0; i + 1 < splits.size(); ++i)
      acc += panel_gauss(g, splits[i], splits[i + 1], nodes);
    return acc * d.sphere_area;
  };
  const double coarse = run(spec.nodes, spec.panels);
  const double fine = run(spec.nodes + spec.nodes / 2, 2 * spec.panels);
  QuadResult res;
  res.value = fine;
  res.error = std::abs(fine - coarse);
  res.converged = res.error <= spec.tol * (std::abs(fine) + 1.0);
  return res;
}

double transverse_sphere_area(int N) {
  // |S^{N-2}| in R^{N-1}
  return 2.0 * std::pow(M_PI, 0.5 * (N - 1)) / std::tgamma(0.5 * (N - 1));
}

namespace {

std::vector<double> shell_splits(double r0, double r1, int panels, double grade_inner) {
  std::vector<double> s;
  s.push_back(r0);
  if (grade_inner > 0.0 && grade_inner < 0.25 * (r1 - r0)) {
    // geometric panels from the inner scale outward
    double a = std::max(r0, 1e-14);
    double edge = r0 + grade_inner;
    while (edge < r1) {
      s.push_back(edge);
      edge = r0 + (edge - r0) * 2.0;
    }
    (void)a;
  } else {
    for (int i = 1; i < panels; ++i) s.push_back(r0 + (r1 - r0) * i / panels);
  }
  s.push_back(r1);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

double shell_pass(const std::function<double(const Vec2&)>& f, const Vec2& center, double r0,
                  double r1, const DimensionParams& d, int radial_panels, int nodes,
                  double grade_inner) {
  const auto splits = shell_splits(r0, r1, radial_panels, grade_inner);
  const double omega = transverse_sphere_area(d.N);
  auto angular = [&](double s) {
    auto g = [&](double phi) {
      const Vec2 p{center.y1 + s * std::cos(phi), center.r + s * std::sin(phi)};
      return f(p) * std::pow(std::sin(phi), d.N - 2.0);
    };
    return panel_gauss(g, 0.0, M_PI, nodes);
  };
  auto radial = [&](double s) { return std::pow(s, d.N - 1.0) * angular(s); };
  double acc = 0.0;
  for (size_t i = 0; i + 1 < splits.size(); ++i)
    acc += panel_gauss(radial, splits[i], splits[i + 1], nodes);
  return acc * omega;
}

}  // namespace

QuadResult shell_integral(const std::function<double(const Vec2&)>& f, const Vec2& center,
                          double r0, double r1, const DimensionParams& d, int radial_panels,
                          int nodes, double grade_inner) {
  const double coarse = shell_pass(f, center, r0, r1, d, radial_panels, nodes, grade_inner);
  const double fine =
      shell_pass(f, center, r0, r1, d, radial_panels * 2, nodes + nodes / 2, grade_inner);
  QuadResult res;
  res.value = fine;
  res.error = std::abs(fine - coarse);
  res.converged = res.error <= 1e-7 * (std::abs(fine) + 1.0);
  return res;
}

QuadResult sphere_integral(const std::function<double(const Vec2&)>& f, const Vec2& center,
                           double delta, const DimensionParams& d, int order) {
  if (delta <= 0.0) throw std::invalid_argument("sphere_integral: delta > 0 required");
  const double omega = transverse_sphere_area(d.N);
  auto pass = [&](int n) {
    auto g = [&](double phi) {
      const Vec2 p{center.y1 + delta * std::cos(phi), center.r + delta * std::sin(phi)};
      return f(p) * std::pow(std::sin(phi), d.N - 2.0);
    };
    return omega * std::pow(delta, d.N - 1.0) * panel_gauss(g, 0.0, M_PI, n);
  };
  const double coarse = pass(order);
  const double fine = pass(order + order / 2 + 4);
  QuadResult res;
  res.value = fine;
  res.error = std::abs(fine - coarse);
  res.converged = res.error <= 1e-8 * (std::abs(fine) + 1.0);
  return res;
}

double angular_moment(int N, double p_abs_cos, int q_cos, int nodes) {
  auto g = [&](double phi) {
    const double c = std::cos(phi);
    double v = std::pow(std::abs(c), p_abs_cos) * std::pow(std::sin(phi), N - 2.0);
    if (q_cos == 1) v *= c;
    return v;
  };
  return panel_gauss(g, 0.0, M_PI, nodes) ;
}

}  // namespace bubblelab
