// Copyright (c) 2026 the grushin project authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "grushin/grid.hpp"

namespace grushin {

/// One hypothesis of the standing assumptions, checked with exact (no
/// epsilon slack) comparisons on the supplied data.
struct HypothesisCheck {
  std::string name;         // short machine-readable id, e.g. "gamma_upper"
  std::string requirement;  // the bound, e.g. "gamma < N*(Gmin - s)/s"
  std::string detail;       // instantiated numbers
  bool pass = false;
};

enum class AdmissibilityContext { ckn, embedding, eigen };

std::string to_string(AdmissibilityContext c);

struct AdmissibilityReport {
  AdmissibilityContext context = AdmissibilityContext::ckn;
  std::vector<HypothesisCheck> checks;
  bool pass = false;

  /// Requirement string of the first failing check; empty when pass.
  std::string first_violation() const;
};

/// Thrown when construction-level hypotheses fail (e.g. the exponent field
/// leaves the band (2, N)); carries the full report.
class AdmissibilityError : public DomainError {
 public:
  AdmissibilityError(const std::string& what, AdmissibilityReport report)
      : DomainError(what), report_(std::move(report)) {}
  const AdmissibilityReport& report() const { return report_; }

 private:
  AdmissibilityReport report_;
};

/// Nodal check that 2 < G(z) < N at every node.
AdmissibilityReport check_exponent_range(std::span<const double> values, int N);

/// Variable exponent G with its finite-difference gradient split and exact
/// nodal bounds Gmin/Gmax. Construction enforces 2 < G(z) < N nodally.
class ExponentField {
 public:
  ExponentField(ScalarField values, const Grid& g);

  const std::vector<double>& values() const { return values_; }
  const SplitGradient& gradient() const { return grad_; }

  double min() const { return min_; }  // G^-
  double max() const { return max_; }  // G^+

  /// Nodal values of G + delta (the shifted exponents G-1, G+1 used by the
  /// space norm and the energy); bounds shift with it by construction.
  std::vector<double> shifted(double delta) const;

  /// Euclidean norms |grad_x G| and |grad_y G| per node (precomputed).
  const std::vector<double>& grad_x_norms() const { return gx_norm_; }
  const std::vector<double>& grad_y_norms() const { return gy_norm_; }

 private:
  std::vector<double> values_;
  SplitGradient grad_;
  std::vector<double> gx_norm_, gy_norm_;
  double min_ = 0.0, max_ = 0.0;
};

struct ExponentBounds {
  double min = 0.0;
  double max = 0.0;
};

/// Exact nodal min and max of G.
ExponentBounds exponent_bounds(const ExponentField& G);

/// Nonnegative nodal weight (|x|^gamma, 1 + |x|^gamma, A(x,y), ...).
class WeightField {
 public:
  explicit WeightField(std::vector<double> values);
  static WeightField ones(std::size_t count) { return WeightField(std::vector<double>(count, 1.0)); }

  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<double> values_;
};

/// Nodal weight |x|^gamma (vanishes on the degeneracy set x = 0).
WeightField degeneracy_weight(const Grid& g, double gamma);

/// Validate the hypothesis set selected by `context` against the exponent
/// bounds. Failures are data, not errors. `s` may be absent for contexts
/// that do not use it; contexts that do record a failing check.
AdmissibilityReport validate_admissibility(double g_min, double g_max, std::optional<double> s,
                                           double gamma, int N, AdmissibilityContext context);
AdmissibilityReport validate_admissibility(const ExponentField& G, std::optional<double> s,
                                           double gamma, int N, AdmissibilityContext context);

/// Modular of the variable-exponent space: integral of w(z) |f(z)|^{p(z)}.
/// Requires p(z) > 1 nodally.
double modular(std::span<const double> f, std::span<const double> p, const WeightField& w,
               const Grid& g);
double modular(std::span<const double> f, double p, const WeightField& w, const Grid& g);

/// Luxemburg norm: inf{eta > 0 : modular(f/eta) <= 1}. Returns 0 when the
/// modular vanishes; otherwise brackets and bisects the unique eta with
/// modular(f/eta) = 1 (the map is continuous and strictly decreasing where
/// positive) to a relative tolerance of 1e-13.
double luxemburg_norm(std::span<const double> f, std::span<const double> p, const WeightField& w,
                      const Grid& g);
double luxemburg_norm(std::span<const double> f, double p, const WeightField& w, const Grid& g);

/// Constant-exponent Lebesgue norm (integral of |f|^s)^(1/s), s > 1.
double lebesgue_norm_const(const ScalarField& f, double s, const Grid& g);

}  // namespace grushin
