#pragma once

#include <span>
#include <vector>

#include "ppq/geometry.hpp"

namespace ppq {

/// Per-partition, per-timestamp prediction coefficients. coeffs[0] multiplies
/// the most recent reconstructed point, coeffs[k-1] the oldest in the window.
struct CoefficientVector {
    std::vector<double> coeffs;

    static CoefficientVector zeros(int k) { return {std::vector<double>(k, 0.0)}; }
    bool operator==(const CoefficientVector& o) const { return coeffs == o.coeffs; }
    bool is_zero() const {
        for (double c : coeffs) if (c != 0.0) return false;
        return true;
    }
};

/// Lag-k autoregressive parameters of one trajectory, used as a partitioning
/// feature. `flagged` marks trajectories with too little history; they land in
/// a default partition.
struct ArFeature {
    std::vector<double> params;
    bool flagged = false;
};

/// One training window: k reconstructed points (oldest to newest) and the
/// actual point they should predict.
struct PredictionWindow {
    std::vector<Point> history;
    Point target;
};

/// Least-squares fit of shared scalar coefficients over the supplied windows;
/// x and y contribute one regression row each. Rank-deficient systems resolve
/// to the damped minimum-norm solution. Throws UsageError on an empty window
/// set or a window whose history is not exactly k points.
CoefficientVector fit_coefficients(std::span<const PredictionWindow> windows, int k);

/// Linear prediction from the k most recent reconstructed points
/// (history ordered oldest to newest). Throws UsageError on length mismatch.
Point predict(const CoefficientVector& coeffs, std::span<const Point> history);

/// Fits AR(k) parameters on a trajectory's own recent actual points
/// (mean-removed, x and y stacked). Fewer than k+1 points returns a flagged
/// zero vector.
ArFeature fit_ar_feature(std::span<const Point> history, int k);

} // namespace ppq
