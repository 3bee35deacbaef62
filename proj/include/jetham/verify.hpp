#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "jetham/scenario.hpp"
#include "jetham/tensors.hpp"

namespace jetham {

/// Outcome of one covariance check: the residual of a transformation law over
/// a set of probe points.
struct CovarianceReport {
  std::string object_id;
  std::string change_id;
  double max_abs_residual = 0.0;
  std::vector<double> per_point;
  double tolerance = 0.0;
  bool pass = false;
};

using TensorFn = std::function<DTensor(const Point&)>;

/// Transforms the old-side tensor by its per-kind Jacobian factors and
/// compares against the tilde-side tensor computed natively at the pushed
/// point. `mutation` perturbs the old tensor's first component (guard mode).
CovarianceReport check_dtensor_covariance(const std::string& object_id, const TensorFn& in_old,
                                          const TensorFn& in_new, const CoordinateChange& chg,
                                          std::span<const Point> pts, double tol,
                                          double mutation = 0.0);

/// Residual of the nonlinear-connection transformation rule between an
/// old-side connection and a tilde-side one computed independently.
CovarianceReport check_nlc_covariance(const std::string& id, const NonlinearConnection& n_old,
                                      const NonlinearConnection& n_new,
                                      const CoordinateChange& chg, std::span<const Point> pts,
                                      double tol, double mutation = 0.0);

/// Residuals of the nine coefficient transformation rules (with their
/// inhomogeneous second-derivative terms) between two independently computed
/// sides.
CovarianceReport check_connection_coeff_rules(const std::string& id,
                                              const NLinearConnection& d_old,
                                              const NLinearConnection& d_new,
                                              const CoordinateChange& chg,
                                              std::span<const Point> pts, double tol,
                                              double mutation = 0.0);

struct AdFdReport {
  double max_rel_order1 = 0.0;
  double max_rel_order2 = 0.0;
  double max_symmetry = 0.0;
  double tolerance = 1e-5;
  bool pass = false;
};

/// Central finite differences (step 1e-5) against forward-mode derivatives of
/// orders 1 and 2, plus mixed-partial symmetry.
AdFdReport ad_fd_crosscheck(std::span<const ScalarField> fields, std::span<const Point> pts);

/// Deterministic corpus of smooth, bounded random expressions.
std::vector<ScalarField> random_field_corpus(Dims dims, int count, std::uint64_t seed);

/// The default verification change set: identity, two affine changes, two
/// mild nonlinear ones (well-conditioned on the probe box).
std::vector<CoordinateChange> standard_changes(Dims dims, std::uint64_t seed);

/// Probe points drawn uniformly in a box of the given radius around a center.
std::vector<Point> probe_points(const Point& center, double radius, int count,
                                std::uint64_t seed);

/// One printable pass/fail line of a verification suite.
struct CheckLine {
  std::string id;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct SuiteOptions {
  int points_per_change = 10;
  double tensor_tol = 1e-6;
  double rule_tol = 1e-8;
  bool mutation_guards = true;
};

/// Covariance of every computed d-tensor family plus the connection rules
/// under the standard changes, with mutation guards.
std::vector<CheckLine> covariance_suite(const CompiledScenario& cs, const SuiteOptions& opt);

/// Definition oracles (torsion, curvature, brackets, deflection), structure
/// checks (duality, projectors, almost product) and the AD/FD cross-check.
std::vector<CheckLine> oracle_suite(const CompiledScenario& cs);

/// Integrability of the horizontal distribution over the eval points; the
/// outcome is a finding, not a failure.
CheckLine integrability_suite(const CompiledScenario& cs);

}  // namespace jetham
