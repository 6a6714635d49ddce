#include "bubblelab/constants.hpp"

#include <cmath>
#include <sstream>

#include "bubblelab/profile.hpp"
#include "json.hpp"

namespace bubblelab {

namespace {

double unit_u(const DimensionParams& d, double r) {
  return d.bubble_amp * std::pow(1.0 + r * r, -0.5 * (d.N - 2));
}
double unit_du(const DimensionParams& d, double r) {
  return -(d.N - 2.0) * d.bubble_amp * r * std::pow(1.0 + r * r, -0.5 * d.N);
}
double unit_psi0(const DimensionParams& d, double r) {
  return 0.5 * (d.N - 2.0) * d.bubble_amp * (1.0 - r * r) * std::pow(1.0 + r * r, -0.5 * d.N);
}

ConstantValue from_quad(const QuadResult& q, std::string formula) {
  return {q.value, q.error, std::move(formula)};
}

}  // namespace

UniversalConstants compute_universal(const DimensionParams& d, const PotentialSpec& pot,
                                     const QuadratureSpec& spec) {
  UniversalConstants uc;
  uc.N = d.N;
  uc.beta = pot.beta;
  const double beta = pot.beta;
  if (!pot.beta_admissible(d.N))
    throw std::domain_error("compute_universal: beta outside (N-4, N-2); beta-moments diverge");

  uc.A_N = {d.bubble_amp, 0.0, "(N(N-2))^{(N-2)/4}"};

  const double ts = d.two_star;
  uc.I_2star = from_quad(
      radial_integral([&](double r) { return std::pow(unit_u(d, r), ts); }, d, spec),
      "Int U^{2*}");
  uc.I_grad = from_quad(
      radial_integral([&](double r) { const double g = unit_du(d, r); return g * g; }, d, spec),
      "Int |grad U|^2");
  uc.I_pow = from_quad(
      radial_integral([&](double r) { return std::pow(unit_u(d, r), ts - 1.0); }, d, spec),
      "Int U^{2*-1}");
  uc.J_2 = from_quad(radial_integral([&](double r) { const double u = unit_u(d, r); return u * u; },
                                     d, spec),
                     "Int U^2");
  uc.J_beta = from_quad(
      radial_integral_range(
          [&](double r) { const double u = unit_u(d, r); return std::pow(r, beta) * u * u; }, d,
          0.0, 1.0, spec),
      "Int_{B_1} |y|^beta U^2");
  uc.M_beta_m2 = from_quad(
      radial_integral(
          [&](double r) { const double u = unit_u(d, r); return std::pow(r, beta - 2.0) * u * u; },
          d, spec),
      "Int |y|^{beta-2} U^2");
  uc.H_beta = {0.5 * uc.M_beta_m2.value * (1.0 + (beta - 2.0) / d.N),
               0.5 * uc.M_beta_m2.error * (1.0 + std::abs(beta - 2.0) / d.N),
               "(1/2)(1+(beta-2)/N) Int |y|^{beta-2} U^2"};

  // J'_beta = omega_{N-2} * [Int_0^pi |cos|^beta sin^{N-2}] * [Int rho^{beta+N-2} U U' drho]
  {
    const double ang = angular_moment(d.N, beta, 0, 64);
    const double ang_fine = angular_moment(d.N, beta, 0, 96);
    auto f = [&](double r) { return std::pow(r, beta - 1.0) * unit_u(d, r) * unit_du(d, r); };
    // radial_integral supplies r^{N-1} and omega_{N-1}; rebuild with the plain measure
    QuadResult rad = radial_integral([&](double r) { return f(r); }, d, spec);
    const double radial_plain = rad.value / d.sphere_area;  // Int r^{beta+N-2} U U'
    const double omega_t = transverse_sphere_area(d.N);
    uc.J_beta_prime = {omega_t * ang_fine * radial_plain,
                       omega_t * (std::abs(ang_fine - ang) * std::abs(radial_plain) +
                                  ang_fine * rad.error / d.sphere_area),
                       "omega_{N-2} Int|cos|^beta sin^{N-2} * Int rho^{beta+N-2} U U'"};
  }
  uc.J_beta_dil = from_quad(
      radial_integral(
          [&](double r) {
            return std::pow(r, beta) * std::pow(unit_u(d, r), ts - 1.0) * unit_psi0(d, r);
          },
          d, spec),
      "Int |y|^beta U^{2*-1} psi_0");
  return uc;
}

namespace {

ConstantValue cbar_dilation(const DimensionParams& d, const QuadratureSpec& spec) {
  CutoffSpec cut;
  const double p = d.two_star - 2.0;
  auto f = [&](double r) {
    const double xi = cutoff_radial(cut, r, 0);
    if (xi == 0.0) return 0.0;
    const double z = xi * unit_psi0(d, r);
    return std::pow(xi * unit_u(d, r), p) * z * z;
  };
  QuadratureSpec s2 = spec;
  s2.breakpoints = {1.0, 2.0};
  auto q = radial_integral_range(f, d, 0.0, 2.0, s2);
  return from_quad(q, "mu^2 <W^{2*-2} Z_{N+1}, Z_{N+1}> at mu=1");
}

ConstantValue cbar_translation(const DimensionParams& d, const QuadratureSpec& spec) {
  CutoffSpec cut;
  const double p = d.two_star - 2.0;
  auto f = [&](double r) {
    const double xi = cutoff_radial(cut, r, 0);
    if (xi == 0.0) return 0.0;
    const double zr = xi * (cutoff_radial(cut, r, 1) * unit_u(d, r) + xi * unit_du(d, r));
    return std::pow(xi * unit_u(d, r), p) * zr * zr / d.N;  // angular average of z1^2/s^2
  };
  QuadratureSpec s2 = spec;
  s2.breakpoints = {1.0, 2.0};
  auto q = radial_integral_range(f, d, 0.0, 2.0, s2);
  return from_quad(q, "mu^{-2} <W^{2*-2} Z_1, Z_1> at mu=1");
}

}  // namespace

DerivedConstants derive_constants(const UniversalConstants& uc, const DimensionParams& d,
                                  const PotentialSpec& pot, int m, bool wrapped) {
  DerivedConstants dc;
  const double a_abs = std::abs(pot.a);
  const double beta = pot.beta;
  if (a_abs == 0.0)
    throw std::invalid_argument("derive_constants: potential amplitude a must be nonzero");

  dc.B1 = {0.5 * (beta + 2.0) * a_abs * uc.J_beta.value,
           0.5 * (beta + 2.0) * a_abs * uc.J_beta.error,
           "(beta+2)/2 |a| J_beta  [d/dmu of Int Q U^2 = a mu^{-(beta+2)} J_beta]"};
  dc.B2 = {(d.N - 2.0) * uc.A_N.value * uc.I_pow.value, (d.N - 2.0) * uc.A_N.value * uc.I_pow.error,
           "(N-2) A_N I_pow  [d/dmu of the pair interaction]"};
  // interaction coefficient of the height balance written with unit Q-term
  // coefficient: C4 = B2 / (B1/|a|); independent of the amplitude a
  const double b1_unit = dc.B1.value / a_abs;
  dc.C4 = {dc.B2.value / b1_unit,
           dc.B2.error / b1_unit + dc.B2.value * (dc.B1.error / a_abs) / (b1_unit * b1_unit),
           "2 (N-2) A_N I_pow / ((beta+2) J_beta)  [unit-amplitude balance coefficient]"};
  dc.B = dc.C4;
  dc.B.formula = "alias of C4 (dilation-Pohozaev route yields the same balance)";
  dc.B_prime = {0.5 * (d.N - 2.0) * (d.N - 2.0) * d.sphere_area * uc.A_N.value * uc.A_N.value, 0.0,
                "(N-2)^2 omega_{N-1} A_N^2 / 2  [harmonic monopole-background pairing]"};
  dc.C1 = {a_abs * beta * uc.H_beta.value, a_abs * beta * uc.H_beta.error,
           "|a| beta H_beta  [linearized Q-force on a shifted bubble]"};
  dc.C2 = {(d.N - 2.0) * uc.A_N.value * uc.I_pow.value, (d.N - 2.0) * uc.A_N.value * uc.I_pow.error,
           "(N-2) A_N I_pow  [pair force magnitude, law C2/(mu^{N-2} d^{N-1})]"};

  // B_bar: mu = B_bar L^{(N-2)/(beta-N+4)} for the configured chain
  double S = 0.0;
  if (wrapped) {
    for (int k = 1; k <= (m + 1) / 2; ++k) {
      const double term = std::pow(static_cast<double>(k), -(d.N - 2.0));
      S += (2 * k == m + 1) ? term : 2.0 * term;
    }
  } else {
    // end bubble of an open chain (weakest interaction, sets the solvable height)
    for (int k = 1; k <= m; ++k) S += std::pow(static_cast<double>(k), -(d.N - 2.0));
  }
  if (m < 1) S = 1.0;
  const double expo = 1.0 / (beta - d.N + 4.0);
  dc.B_bar = {std::pow(dc.C4.value * S, -expo),
              std::abs(expo) * std::pow(dc.C4.value * S, -expo - 1.0) * S * dc.C4.error,
              "(C4 sum_{k!=0}|k|^{-(N-2)})^{-1/(beta-N+4)}"};

  QuadratureSpec qs;
  dc.c_bar_dilation = cbar_dilation(d, qs);
  dc.c_bar_translation = cbar_translation(d, qs);
  return dc;
}

std::string constants_to_json(const UniversalConstants& uc, const DerivedConstants& dc) {
  nlohmann::ordered_json j;
  auto put = [&](const char* key, const ConstantValue& c) {
    j[key] = {{"value", c.value}, {"error", c.error}, {"formula", c.formula}};
  };
  j["N"] = uc.N;
  j["beta"] = uc.beta;
  put("A_N", uc.A_N);
  put("I_2star", uc.I_2star);
  put("I_grad", uc.I_grad);
  put("I_pow", uc.I_pow);
  put("J_2", uc.J_2);
  put("J_beta", uc.J_beta);
  put("J_beta_prime", uc.J_beta_prime);
  put("J_beta_dil", uc.J_beta_dil);
  put("M_beta_minus2", uc.M_beta_m2);
  put("H_beta", uc.H_beta);
  put("B_bar", dc.B_bar);
  put("B", dc.B);
  put("B_prime", dc.B_prime);
  put("B1", dc.B1);
  put("B2", dc.B2);
  put("C1", dc.C1);
  put("C2", dc.C2);
  put("C4", dc.C4);
  put("c_bar_translation", dc.c_bar_translation);
  put("c_bar_dilation", dc.c_bar_dilation);
  return j.dump(2);
}

InteractionResult interaction_integral(const Bubble& bi, const Bubble& bj,
                                       const DimensionParams& d, const QuadratureSpec& spec) {
  if (dist2(bi.center, bj.center) == 0.0)
    throw std::invalid_argument("interaction_integral: centers must be distinct");
  const double sep = std::sqrt(dist2(bi.center, bj.center));
  const double p = d.two_star - 1.0;
  auto f = [&](const Vec2& y) {
    return eval_bubble_power(bi, d, y, p) * eval_bubble(bj, d, y);
  };
  // polar patches around each center plus a far shell; the i-core carries the mass
  const double half = 0.5 * sep;
  QuadResult near_i = shell_integral(f, bi.center, 0.0, half, d, 24, spec.nodes, 0.25 / bi.height);
  QuadResult near_j = shell_integral(f, bj.center, 0.0, half, d, 24, spec.nodes, 0.25 / bj.height);
  const double far_radius = 40.0 * sep;
  QuadResult mid = shell_integral(f, bi.center, half, far_radius, d, 32, spec.nodes, 0.0);
  // analytic tail beyond far_radius: integrand ~ A^p A mu_i^{-(N+2)/2} mu_j^{-(N-2)/2} |y|^{-2N}
  const double tail_coef = std::pow(d.bubble_amp, p) * d.bubble_amp *
                           std::pow(bi.height, -0.5 * (d.N + 2)) *
                           std::pow(bj.height, -0.5 * (d.N - 2));
  const double tail = d.sphere_area * tail_coef * std::pow(far_radius, -d.N) / d.N;

  InteractionResult res;
  res.value = near_i.value + near_j.value + mid.value + tail;
  res.error = near_i.error + near_j.error + mid.error + std::abs(tail);
  const double mu_prod = std::pow(bi.height, 0.5 * (d.N - 2)) * std::pow(bj.height, 0.5 * (d.N - 2));
  // I_pow for the unit bubble, computed on the fly
  auto upow = radial_integral(
      [&](double r) {
        return std::pow(d.bubble_amp * std::pow(1.0 + r * r, -0.5 * (d.N - 2)), p);
      },
      d, spec);
  res.asymptotic = d.bubble_amp * upow.value / (mu_prod * std::pow(sep, d.N - 2.0));
  res.asymptotic_valid = std::min(bi.height, bj.height) * sep >= 10.0;
  return res;
}

}  // namespace bubblelab
