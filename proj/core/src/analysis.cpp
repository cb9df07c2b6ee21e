// Copyright (c) 2026 the grushin project authors
// SPDX-License-Identifier: Apache-2.0

#include "grushin/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace grushin {

namespace {

// Golden-section maximization of a unimodal f on [lo, hi].
template <class F>
double golden_max(F f, double lo, double hi, int iterations = 200) {
  constexpr double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iterations && (b - a) > 1e-14 * (std::fabs(a) + std::fabs(b)); ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double log_inequality_constant() {
  // sup_{t>0} t|ln t|/(t^2+1); the map is symmetric under t -> 1/t, so the
  // supremum is attained on (1, inf) where it is unimodal.
  static const double mu = [] {
    auto f = [](double t) { return t * std::log(t) / (t * t + 1.0); };
    const double t_star = golden_max(f, 1.0 + 1e-12, 100.0);
    return f(t_star);
  }();
  return mu;
}

BetaConstants beta_formula(const ExponentField& G, double gamma, const Grid& g,
                           EpsilonPolicy policy, double fixed_epsilon) {
  if (!(gamma > 0.0)) throw DomainError("gamma > 0 required");
  BetaConstants out;
  const auto& xn = g.x_norms();
  const auto& yn = g.y_norms();
  out.w1_sup = *std::max_element(xn.begin(), xn.end());
  out.w2_sup = *std::max_element(yn.begin(), yn.end());
  out.mu = log_inequality_constant();

  const double w = out.w1_sup + out.w2_sup;
  const double g_max = G.max();
  const double g_min = G.min();
  const double eps_bound = 2.0 / (g_max * w);

  auto beta_of = [&](double eps) {
    const double den = 2.0 - eps * g_max * w;
    return w * std::max(out.mu, g_max / std::pow(eps, g_min - 1.0)) / den;
  };

  switch (policy) {
    case EpsilonPolicy::half_bound:
      out.epsilon = 1.0 / (g_max * w);
      break;
    case EpsilonPolicy::fixed:
      out.epsilon = fixed_epsilon;
      break;
    case EpsilonPolicy::minimize: {
      // coarse log scan for a bracket, then golden-section on -beta
      const double lo = eps_bound * 1e-6;
      const double hi = eps_bound * (1.0 - 1e-9);
      double best = lo;
      double best_val = beta_of(lo);
      const int scan = 128;
      for (int i = 1; i <= scan; ++i) {
        const double e = lo * std::pow(hi / lo, static_cast<double>(i) / scan);
        const double v = beta_of(e);
        if (v < best_val) {
          best_val = v;
          best = e;
        }
      }
      const double bl = std::max(lo, best / 2.0);
      const double bh = std::min(hi, best * 2.0);
      out.epsilon = golden_max([&](double e) { return -beta_of(e); }, bl, bh);
      break;
    }
  }

  const double den = 2.0 - out.epsilon * g_max * w;
  if (!(out.epsilon > 0.0) || !(den > 0.0))
    throw DomainError("epsilon must satisfy 0 < epsilon < 2/(Gmax (||W1|| + ||W2||)) = " +
                      std::to_string(eps_bound));
  out.beta = beta_of(out.epsilon);
  if (!(out.beta > 0.0) || !std::isfinite(out.beta)) throw DomainError("beta must be positive and finite");
  return out;
}

CknSides ckn_sides(const ScalarField& u, const ExponentField& G, double gamma, const Grid& g) {
  if (u.size() != g.node_count()) throw DomainError("field size does not match grid");
  if (!u.dirichlet) throw DomainError("ckn_sides requires a compactly supported (Dirichlet) field");
  const SplitGradient du = grad_split(u, g);
  const auto& qw = g.quadrature_weights();
  const auto& Gv = G.values();
  const auto& xn = g.x_norms();
  const auto& gxn = G.grad_x_norms();
  const auto& gyn = G.grad_y_norms();

  KahanSum lhs, rhs1, rhs2;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double G_i = Gv[i];
    const double xg = std::pow(xn[i], gamma);
    const double a = std::fabs(u[i]);
    if (a > 0.0) {
      const double apow = std::pow(a, G_i);
      lhs.add(qw[i] * (1.0 + xg) * apow);
      const double A_i = gxn[i] + xg * gyn[i];
      if (A_i > 0.0) rhs2.add(qw[i] * std::pow(a, G_i - 1.0) * (1.0 + u[i] * u[i]) * A_i);
    }
    double t = 0.0;
    const double dxn = du.x_norm(i);
    if (dxn > 0.0) t += std::pow(dxn, G_i);
    const double dyn = du.y_norm(i);
    if (dyn > 0.0) t += xg * std::pow(dyn, G_i);
    rhs1.add(qw[i] * t);
  }
  return CknSides{lhs.value(), rhs1.value(), rhs2.value()};
}

BumpSpec sample_bump(const DomainSpec& domain, CounterRng& rng, const EnsembleSpec& ens) {
  if (!(ens.radius_fraction[0] > 0.0 && ens.radius_fraction[1] < 1.0 &&
        ens.radius_fraction[0] <= ens.radius_fraction[1]))
    throw DomainError("ensemble radius fractions must satisfy 0 < lo <= hi < 1");
  BumpSpec bump;
  bump.center.resize(static_cast<std::size_t>(domain.dim()));
  bump.radii.resize(static_cast<std::size_t>(domain.dim()));
  for (int a = 0; a < domain.dim(); ++a) {
    const AxisSpec& ax = domain.axes[static_cast<std::size_t>(a)];
    const double half = 0.5 * (ax.hi - ax.lo);
    const double margin = 1e-9 * (ax.hi - ax.lo);
    const double r = half * rng.uniform(ens.radius_fraction[0], ens.radius_fraction[1]);
    bump.radii[a] = r;
    bump.center[a] = rng.uniform(ax.lo + r + margin, ax.hi - r - margin);
  }
  bump.amplitude = rng.uniform(ens.amplitude_range[0], ens.amplitude_range[1]);
  return bump;
}

ScalarField realize_bump(const BumpSpec& bump, const Grid& g) {
  return make_bump(g, bump.center, bump.radii, bump.amplitude);
}

CknReport verify_ckn(const ExponentField& G, double gamma, const Grid& g, const EnsembleSpec& ens,
                     double tolerance, EpsilonPolicy policy) {
  CknReport report;
  report.tolerance = tolerance;
  report.constants = beta_formula(G, gamma, g, policy);
  report.members.reserve(static_cast<std::size_t>(ens.count));

  CounterRng rng(ens.seed, "ckn-ensemble");
  double beta_emp = 0.0;
  for (int k = 0; k < ens.count; ++k) {
    const BumpSpec bump = sample_bump(g.spec(), rng, ens);
    const ScalarField u = realize_bump(bump, g);
    CknMember member;
    member.sides = ckn_sides(u, G, gamma, g);
    const double rhs = member.sides.rhs1 + member.sides.rhs2;
    if (rhs > 0.0) {
      member.ratio = member.sides.lhs / rhs;
      member.ratio_defined = true;
      beta_emp = std::max(beta_emp, member.ratio);
      member.violation = member.sides.lhs > report.constants.beta * rhs * (1.0 + tolerance);
    }
    if (member.violation) ++report.violations;
    report.members.push_back(member);
  }
  report.beta_empirical = beta_emp;
  return report;
}

DivergenceResidual divergence_identity_residual(const ScalarField& u, const ExponentField& G,
                                                double gamma, const Grid& g,
                                                double threshold_fraction) {
  if (u.size() != g.node_count()) throw DomainError("field size does not match grid");
  const std::size_t nodes = g.node_count();
  const int n = g.dim_x();
  const int m = g.dim_y();

  double umax = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) umax = std::max(umax, std::fabs(u[i]));
  const double threshold = threshold_fraction * umax;

  const SplitGradient du = grad_split(u, g);
  const SplitGradient& dG = G.gradient();
  const auto& Gv = G.values();
  const auto& xn = g.x_norms();
  const auto& boundary = g.boundary_mask();

  // |u|^G per node, shared by both flux fields.
  std::vector<double> upow(nodes, 0.0);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double a = std::fabs(u[i]);
    if (a > 0.0) upow[i] = std::pow(a, Gv[i]);
  }

  // FD divergence of (x |u|^G, 0) over the x-axes.
  std::vector<double> div1(nodes, 0.0);
  std::vector<double> field(nodes);
  for (int a = 0; a < n; ++a) {
    for (std::size_t i = 0; i < nodes; ++i) field[i] = g.coordinate(i, a) * upow[i];
    const std::vector<double> d = axis_derivative(field, g, a);
    for (std::size_t i = 0; i < nodes; ++i) div1[i] += d[i];
  }

  // FD divergence of (0, |x|^gamma |u|^G y) over the y-axes.
  std::vector<double> div2(nodes, 0.0);
  for (int b = 0; b < m; ++b) {
    const int axis = n + b;
    for (std::size_t i = 0; i < nodes; ++i)
      field[i] = g.coordinate(i, axis) * std::pow(xn[i], gamma) * upow[i];
    const std::vector<double> d = axis_derivative(field, g, axis);
    for (std::size_t i = 0; i < nodes; ++i) div2[i] += d[i];
  }

  DivergenceResidual out;
  out.threshold_fraction = threshold_fraction;
  out.res1_field.assign(nodes, 0.0);
  out.res2_field.assign(nodes, 0.0);
  out.mask.assign(nodes, 0);

  for (std::size_t i = 0; i < nodes; ++i) {
    if (boundary[i] || !(std::fabs(u[i]) > threshold)) continue;
    out.mask[i] = 1;
    const double a = std::fabs(u[i]);
    const double G_i = Gv[i];
    const double sgn_pow = (u[i] > 0.0 ? 1.0 : -1.0) * std::pow(a, G_i - 1.0);  // |u|^{G-2} u
    const double logu = std::log(a);

    double x_dot_du = 0.0, x_dot_dG = 0.0;
    for (int ax = 0; ax < n; ++ax) {
      const double xc = g.coordinate(i, ax);
      x_dot_du += xc * du.x(i, ax);
      x_dot_dG += xc * dG.x(i, ax);
    }
    const double rhs1 = n * upow[i] + G_i * sgn_pow * x_dot_du + upow[i] * logu * x_dot_dG;
    out.res1_field[i] = std::fabs(div1[i] - rhs1);
    out.res1 = std::max(out.res1, out.res1_field[i]);

    double y_dot_du = 0.0, y_dot_dG = 0.0;
    for (int b = 0; b < m; ++b) {
      const double yc = g.coordinate(i, n + b);
      y_dot_du += yc * du.y(i, b);
      y_dot_dG += yc * dG.y(i, b);
    }
    const double xg = std::pow(xn[i], gamma);
    const double rhs2 = xg * (m * upow[i] + G_i * sgn_pow * y_dot_du + upow[i] * logu * y_dot_dG);
    out.res2_field[i] = std::fabs(div2[i] - rhs2);
    out.res2 = std::max(out.res2, out.res2_field[i]);
  }
  return out;
}

FluxDivergence flux_divergence(const ScalarField& u, const ExponentField& G, double gamma,
                               const Grid& g) {
  if (u.size() != g.node_count()) throw DomainError("field size does not match grid");
  const std::size_t nodes = g.node_count();
  const int n = g.dim_x();
  const int m = g.dim_y();
  const auto& Gv = G.values();
  const auto& xn = g.x_norms();

  std::vector<double> upow(nodes, 0.0);
  for (std::size_t i = 0; i < nodes; ++i) {
    const double a = std::fabs(u[i]);
    if (a > 0.0) upow[i] = std::pow(a, Gv[i]);
  }

  FluxDivergence out;
  std::vector<double> field(nodes);
  {
    std::vector<double> div(nodes, 0.0);
    for (int a = 0; a < n; ++a) {
      for (std::size_t i = 0; i < nodes; ++i) field[i] = g.coordinate(i, a) * upow[i];
      const std::vector<double> d = axis_derivative(field, g, a);
      for (std::size_t i = 0; i < nodes; ++i) div[i] += d[i];
    }
    ScalarField f(div);
    out.integral1 = integrate(f, g);
    for (auto& v : f.values) v = std::fabs(v);
    out.scale1 = integrate(f, g);
  }
  {
    std::vector<double> div(nodes, 0.0);
    for (int b = 0; b < m; ++b) {
      const int axis = n + b;
      for (std::size_t i = 0; i < nodes; ++i)
        field[i] = g.coordinate(i, axis) * std::pow(xn[i], gamma) * upow[i];
      const std::vector<double> d = axis_derivative(field, g, axis);
      for (std::size_t i = 0; i < nodes; ++i) div[i] += d[i];
    }
    ScalarField f(div);
    out.integral2 = integrate(f, g);
    for (auto& v : f.values) v = std::fabs(v);
    out.scale2 = integrate(f, g);
  }
  return out;
}

double embedding_ratio(const ScalarField& u, double s, const ExponentField& G, double gamma,
                       const Grid& g) {
  const WNormBreakdown w = w_norm(u, G, gamma, g);
  if (w.sum == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return lebesgue_norm_const(u, s, g) / w.sum;
}

EmbeddingReport estimate_embedding(const ExponentField& G, double s, double gamma, const Grid& g,
                                   const EnsembleSpec& ens) {
  const AdmissibilityReport adm =
      validate_admissibility(G, s, gamma, g.dim(), AdmissibilityContext::embedding);
  if (!adm.pass)
    throw AdmissibilityError("embedding estimator requires admissible (s, gamma): " +
                                 adm.first_violation(),
                             adm);

  EmbeddingReport report;
  CounterRng rng(ens.seed, "embedding-ensemble");
  KahanSum mean;
  for (int k = 0; k < ens.count; ++k) {
    const BumpSpec bump = sample_bump(g.spec(), rng, ens);
    const ScalarField u = realize_bump(bump, g);
    const double r = embedding_ratio(u, s, G, gamma, g);
    if (std::isnan(r)) {
      ++report.skipped;
      continue;
    }
    report.ratios.push_back(r);
    report.sup_ratio = std::max(report.sup_ratio, r);
    mean.add(r);
    ++report.count;
  }
  if (report.count > 0) report.mean_ratio = mean.value() / report.count;
  return report;
}

}  // namespace grushin
