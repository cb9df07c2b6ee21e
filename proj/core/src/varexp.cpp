// Copyright (c) 2026 the grushin project authors
// SPDX-License-Identifier: Apache-2.0

#include "grushin/varexp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "grushin/rng.hpp"

namespace grushin {

std::string to_string(AdmissibilityContext c) {
  switch (c) {
    case AdmissibilityContext::ckn: return "ckn";
    case AdmissibilityContext::embedding: return "embedding";
    case AdmissibilityContext::eigen: return "eigen";
  }
  return "?";
}

std::string AdmissibilityReport::first_violation() const {
  for (const auto& c : checks)
    if (!c.pass) return c.requirement + " (" + c.detail + ")";
  return {};
}

namespace {

HypothesisCheck make_check(std::string name, std::string requirement, std::string detail, bool pass) {
  return HypothesisCheck{std::move(name), std::move(requirement), std::move(detail), pass};
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

AdmissibilityReport check_exponent_range(std::span<const double> values, int N) {
  AdmissibilityReport report;
  report.context = AdmissibilityContext::ckn;
  if (values.empty()) {
    report.checks.push_back(make_check("nonempty", "exponent field non-empty", "0 nodes", false));
    report.pass = false;
    return report;
  }
  double lo = values[0], hi = values[0];
  std::size_t lo_at = 0, hi_at = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < lo) { lo = values[i]; lo_at = i; }
    if (values[i] > hi) { hi = values[i]; hi_at = i; }
  }
  report.checks.push_back(make_check(
      "G_above_2", "G(z) > 2 at every node",
      "min G = " + num(lo) + " at node " + std::to_string(lo_at), lo > 2.0));
  report.checks.push_back(make_check(
      "G_below_N", "G(z) < N at every node",
      "max G = " + num(hi) + " at node " + std::to_string(hi_at) + ", N = " + std::to_string(N),
      hi < static_cast<double>(N)));
  report.pass = std::all_of(report.checks.begin(), report.checks.end(),
                            [](const HypothesisCheck& c) { return c.pass; });
  return report;
}

ExponentField::ExponentField(ScalarField values, const Grid& g)
    : values_(std::move(values.values)), grad_(grad_split(ScalarField(values_), g)) {
  if (values_.size() != g.node_count()) throw DomainError("exponent field size does not match grid");
  AdmissibilityReport range = check_exponent_range(values_, g.dim());
  if (!range.pass)
    throw AdmissibilityError("exponent field violates 2 < G(z) < N: " + range.first_violation(),
                             std::move(range));
  min_ = *std::min_element(values_.begin(), values_.end());
  max_ = *std::max_element(values_.begin(), values_.end());
  gx_norm_.resize(values_.size());
  gy_norm_.resize(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) {
    gx_norm_[i] = grad_.x_norm(i);
    gy_norm_[i] = grad_.y_norm(i);
  }
}

std::vector<double> ExponentField::shifted(double delta) const {
  std::vector<double> out(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) out[i] = values_[i] + delta;
  return out;
}

ExponentBounds exponent_bounds(const ExponentField& G) { return ExponentBounds{G.min(), G.max()}; }

WeightField::WeightField(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!(values_[i] >= 0.0))
      throw DomainError("weight field must be nonnegative (node " + std::to_string(i) + ")");
}

WeightField degeneracy_weight(const Grid& g, double gamma) {
  if (!(gamma > 0.0)) throw DomainError("gamma > 0 required for the degeneracy weight |x|^gamma");
  std::vector<double> w(g.node_count());
  const auto& xn = g.x_norms();
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::pow(xn[i], gamma);
  return WeightField(std::move(w));
}

AdmissibilityReport validate_admissibility(double g_min, double g_max, std::optional<double> s,
                                           double gamma, int N, AdmissibilityContext context) {
  AdmissibilityReport report;
  report.context = context;
  auto& checks = report.checks;

  checks.push_back(make_check("N_min", "N = n + m >= 3 (the band (2, N) is non-empty)",
                              "N = " + std::to_string(N), N >= 3));
  checks.push_back(make_check("G_above_2", "G(z) > 2 at every node", "min G = " + num(g_min),
                              g_min > 2.0));
  checks.push_back(make_check("G_below_N", "G(z) < N at every node",
                              "max G = " + num(g_max) + ", N = " + std::to_string(N),
                              g_max < static_cast<double>(N)));
  checks.push_back(
      make_check("gamma_lower", "gamma > 0", "gamma = " + num(gamma), gamma > 0.0));

  const bool needs_s = context != AdmissibilityContext::ckn;
  if (needs_s) {
    if (!s.has_value()) {
      checks.push_back(make_check("s_present", "reaction exponent s must be configured",
                                  "s missing", false));
    } else {
      const double sv = *s;
      if (context == AdmissibilityContext::embedding) {
        checks.push_back(make_check("s_range", "1 < s < Gmin",
                                    "s = " + num(sv) + ", Gmin = " + num(g_min),
                                    1.0 < sv && sv < g_min));
      } else {
        checks.push_back(make_check("s_range", "1 < s < Gmin - 1",
                                    "s = " + num(sv) + ", Gmin - 1 = " + num(g_min - 1.0),
                                    1.0 < sv && sv < g_min - 1.0));
      }
      const double bound = static_cast<double>(N) * (g_min - sv) / sv;
      checks.push_back(make_check("gamma_upper", "gamma < N*(Gmin - s)/s (compact embedding)",
                                  "gamma = " + num(gamma) + ", N*(Gmin - s)/s = " + num(bound),
                                  gamma < bound));
    }
  }

  report.pass = std::all_of(checks.begin(), checks.end(),
                            [](const HypothesisCheck& c) { return c.pass; });
  return report;
}

AdmissibilityReport validate_admissibility(const ExponentField& G, std::optional<double> s,
                                           double gamma, int N, AdmissibilityContext context) {
  return validate_admissibility(G.min(), G.max(), s, gamma, N, context);
}

namespace {

void check_modular_args(std::span<const double> f, std::span<const double> p, const WeightField& w,
                        const Grid& g) {
  if (f.size() != g.node_count() || p.size() != g.node_count() || w.size() != g.node_count())
    throw DomainError("modular arguments must match the grid node count");
}

double modular_scaled(std::span<const double> f, std::span<const double> p, const WeightField& w,
                      const Grid& g, double inv_eta) {
  KahanSum sum;
  const auto& qw = g.quadrature_weights();
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = std::fabs(f[i]) * inv_eta;
    if (a == 0.0 || w[i] == 0.0) continue;
    sum.add(qw[i] * w[i] * std::pow(a, p[i]));
  }
  return sum.value();
}

}  // namespace

double modular(std::span<const double> f, std::span<const double> p, const WeightField& w,
               const Grid& g) {
  check_modular_args(f, p, w, g);
  for (std::size_t i = 0; i < p.size(); ++i)
    if (!(p[i] > 1.0)) throw DomainError("modular exponent must satisfy p(z) > 1");
  return modular_scaled(f, p, w, g, 1.0);
}

double modular(std::span<const double> f, double p, const WeightField& w, const Grid& g) {
  std::vector<double> pv(g.node_count(), p);
  return modular(f, pv, w, g);
}

double luxemburg_norm(std::span<const double> f, std::span<const double> p, const WeightField& w,
                      const Grid& g) {
  check_modular_args(f, p, w, g);
  double p_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 1.0)) throw DomainError("Luxemburg exponent must satisfy p(z) > 1");
    p_min = std::min(p_min, p[i]);
  }

  const double m0 = modular_scaled(f, p, w, g, 1.0);
  if (m0 == 0.0) return 0.0;

  // Constant-exponent estimate with the smallest exponent, then expand by
  // factors of 2 until the modular straddles 1.
  double eta = std::pow(m0, 1.0 / p_min);
  if (!std::isfinite(eta) || eta <= 0.0) eta = 1.0;

  auto value = [&](double e) { return modular_scaled(f, p, w, g, 1.0 / e); };

  double lo, hi;
  double m_eta = value(eta);
  if (m_eta > 1.0) {
    lo = eta;
    hi = eta;
    do {
      lo = hi;
      hi *= 2.0;
      if (!std::isfinite(hi)) throw DomainError("Luxemburg bracket expansion overflow");
      m_eta = value(hi);
    } while (m_eta > 1.0);
    if (m_eta == 1.0) return hi;
  } else if (m_eta < 1.0) {
    hi = eta;
    lo = eta;
    do {
      hi = lo;
      lo /= 2.0;
      if (lo == 0.0) return 0.0;  // modular positive but vanishing scale: f is zero on the support
      m_eta = value(lo);
    } while (m_eta < 1.0);
    if (m_eta == 1.0) return lo;
  } else {
    return eta;
  }

  // Bisection: the bracket [lo, hi] keeps modular(lo) >= 1 >= modular(hi).
  for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (value(mid) > 1.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double luxemburg_norm(std::span<const double> f, double p, const WeightField& w, const Grid& g) {
  std::vector<double> pv(g.node_count(), p);
  return luxemburg_norm(f, pv, w, g);
}

double lebesgue_norm_const(const ScalarField& f, double s, const Grid& g) {
  if (!(s > 1.0)) throw DomainError("Lebesgue exponent must satisfy s > 1");
  KahanSum sum;
  const auto& qw = g.quadrature_weights();
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = std::fabs(f[i]);
    if (a == 0.0) continue;
    sum.add(qw[i] * std::pow(a, s));
  }
  return std::pow(sum.value(), 1.0 / s);
}

}  // namespace grushin
