#pragma once

#include "jetham/connections.hpp"

namespace jetham {

/// f~ = f o (inverse transport): the same scalar read in the new coordinates.
Field pullback_scalar(const Field& f, const CoordinateChange& chg);

/// Metrics re-expressed in the new coordinates with their two covariant
/// Jacobian factors, h~_ab(t~) = h_cd(t) dt^c/dt~^a dt^d/dt~^b.
TemporalMetric transform_temporal_metric(const TemporalMetric& h, const CoordinateChange& chg);
SpatialMetric transform_spatial_metric(const SpatialMetric& phi, const CoordinateChange& chg);

/// Classical linear-connection transformation on each base block, including
/// the inhomogeneous second-derivative term.
LinearConnectionCoeffs transform_linear_coeffs(const LinearConnectionCoeffs& lc,
                                               const CoordinateChange& chg);

/// Nonlinear-connection coefficients in the new coordinates via its
/// transformation rule (solved for the tilde side).
NonlinearConnection transform_nlc_by_rule(const NonlinearConnection& N,
                                          const CoordinateChange& chg);

/// The nine N-linear coefficient families in the new coordinates via the
/// nine-rule transformation theorem.
NLinearConnection transform_connection_by_rules(const NLinearConnection& D,
                                                const CoordinateChange& chg);

}  // namespace jetham
