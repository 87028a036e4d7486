#pragma once

// Hypothesis checks for the transform machinery: decay and regularity
// conditions on a profile, endpoint integrability criteria decided by
// dyadic-block slope analysis, and the L1 comparison between the radial
// transform and a one-dimensional sine transform.

#include <functional>
#include <string>
#include <vector>

#include "radialft/profiles.hpp"

namespace radialft::diagnostics {

enum class ConditionId { c1, c2, c3, c4, c14, c15, c20 };
enum class Status { pass, fail, undetermined };

std::string condition_name(ConditionId c);
std::string status_name(Status s);

struct Evidence {
  double value = 0.0;
  double uncertainty = 0.0;
  double slope = 0.0;
};

struct ConditionVerdict {
  ConditionId condition = ConditionId::c1;
  Status status = Status::undetermined;
  Evidence evidence;
};

/// Convergence classification of a sum of positive block masses m_1, m_2, ...
/// from the trailing blocks: geometric decay (slope of log2 m_k in k), or
/// failing that a power law in k (slope of ln m_k in ln k, converging iff the
/// decay exponent exceeds 1).
struct BlockClassification {
  Status status = Status::undetermined;
  /// Sum of the masses plus the extrapolated tail.
  double sum = 0.0;
  double tail = 0.0;
  double uncertainty = 0.0;
  /// Geometric rate s (m_k ~ 2^(-s k)) or power exponent p (m_k ~ k^-p).
  double slope = 0.0;
  bool geometric = false;
};

BlockClassification classify_blocks(const std::vector<double>& masses);

/// Conditions (1)-(4) for the fractional order alpha in dimension n.
std::vector<ConditionVerdict> check_conditions(const profiles::RadialProfile& profile, int n, double alpha);

/// ∫_0^1 |F(t)|/t dt < ∞ with F built for alpha = (n-1)/2.
ConditionVerdict check_condition14(const profiles::RadialProfile& profile, int n);
ConditionVerdict check_condition14(const std::function<double(double)>& F);

/// Σ_k k^(-1) sqrt(ω(F; 1/k)) up to k_max for alpha = (n-1)/2.
ConditionVerdict zygmund_bochkarev(const profiles::RadialProfile& profile, int n, long k_max = 100000);
/// The same series for a given modulus k -> ω(F; 1/k).
ConditionVerdict zygmund_bochkarev_series(const std::function<double(double)>& omega_of_k, long k_max);

/// ∫_0^1 f0(t) (1-t)^(-(n+1)/2) dt < ∞ for f0 supported on [0, 1].
ConditionVerdict corollary2_criterion(const profiles::RadialProfile& profile, int n);

/// Area of the unit sphere in R^n.
double sphere_area(int n);

/// ∫_{1 <= |x| <= N} |fhat(x)| dx for each N (sorted ascending), computed
/// from the fractional representation with alpha = (n-1)/2 on a uniform
/// radius grid of spacing dr.
std::vector<double> radial_l1(const profiles::RadialProfile& profile, int n, const std::vector<double>& N_grid,
                              double dr = 0.25, bool force = true);

struct L1ComparisonReport {
  std::vector<double> N_grid;
  std::vector<double> lhs;
  std::vector<double> rhs;
  /// lhs - constant_derived * rhs.
  std::vector<double> residual;
  /// lhs - constant_printed * rhs.
  std::vector<double> residual_printed;
  /// V_F + ∫_0^1 |F|/t.
  double residual_bound = 0.0;
  double constant_printed = 0.0;
  double constant_derived = 0.0;
  /// max |residual| / residual_bound over the grid.
  double normalized_residual = 0.0;
  /// Condition (14) failed: both sides are expected to grow with N.
  bool diverging = false;
  /// Slopes of lhs and constant_derived * rhs against ln N.
  double lhs_growth = 0.0;
  double rhs_growth = 0.0;
};

L1ComparisonReport theorem2_compare(const profiles::RadialProfile& profile, int n, std::vector<double> N_grid);

}  // namespace radialft::diagnostics
