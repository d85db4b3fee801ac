#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ppq/errors.hpp"
#include "ppq/geometry.hpp"

namespace ppq {

using TrajectoryId = uint64_t;
using Timestamp = int64_t; // discrete steps, 1-based

struct TrajectoryPoint {
    double x = 0.0;
    double y = 0.0;
    Timestamp t = 1;

    Point pos() const { return {x, y}; }
};

struct Trajectory {
    TrajectoryId id = 0;
    std::vector<TrajectoryPoint> points; // timestamps strictly increasing
};

/// All positions observed at one timestamp, keyed by trajectory id.
struct StreamBatch {
    Timestamp t = 1;
    std::map<TrajectoryId, Point> entries;
};

enum class PartitionMode {
    Spatial,         // partition by position proximity
    Autocorrelation, // partition by lag-k AR parameter similarity
    Single,          // one global predictor, no partitioning
    None,            // no prediction; quantize raw points
};

std::string to_string(PartitionMode m);
PartitionMode partition_mode_from_string(const std::string& s);

struct Config {
    double eps1 = 0.001;   // spatial deviation threshold, coordinate units
    double eps_p = 0.1;    // partition threshold (0.01 typical for autocorrelation mode)
    double eps_s = 0.1;    // index partition threshold
    double eps_c = 0.5;    // per-region TRD dropping-rate threshold
    double eps_d = 0.5;    // ADR rebuild threshold
    double g_c_m = 100.0;  // index grid cell size, meters
    double g_s_m = 50.0;   // CQC grid cell size, meters
    int k = 2;             // prediction lag order
    PartitionMode mode = PartitionMode::Spatial;
    double units_per_meter = 1.0 / 111320.0; // degrees per meter, flat approximation
    bool cqc_enabled = true;
    uint64_t page_bytes = 1u << 20;

    double gc_units() const { return g_c_m * units_per_meter; }
    double gs_units() const { return g_s_m * units_per_meter; }
    double eps1_meters() const { return eps1 / units_per_meter; }

    /// Throws UsageError when a threshold is out of range.
    void validate() const;
};

/// Splits trajectories into per-timestamp batches; batch t holds exactly the
/// points stamped t.
std::vector<StreamBatch> to_batches(const std::vector<Trajectory>& trajectories);

/// Validates per-trajectory invariants (non-empty, strictly increasing t, finite).
void validate_trajectories(const std::vector<Trajectory>& trajectories);

} // namespace ppq
