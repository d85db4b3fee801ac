#include "ppq/types.hpp"

#include <cmath>

namespace ppq {

std::string to_string(PartitionMode m) {
    switch (m) {
        case PartitionMode::Spatial: return "ppq-s";
        case PartitionMode::Autocorrelation: return "ppq-a";
        case PartitionMode::Single: return "epq";
        case PartitionMode::None: return "q-traj";
    }
    return "?";
}

PartitionMode partition_mode_from_string(const std::string& s) {
    if (s == "ppq-s" || s == "spatial") return PartitionMode::Spatial;
    if (s == "ppq-a" || s == "autocorrelation") return PartitionMode::Autocorrelation;
    if (s == "epq" || s == "single") return PartitionMode::Single;
    if (s == "q-traj" || s == "none") return PartitionMode::None;
    throw UsageError("unknown partition mode: " + s);
}

void Config::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw UsageError(std::string(name) + " must be a positive finite number");
        }
    };
    positive(eps1, "eps1");
    positive(eps_p, "eps_p");
    positive(eps_s, "eps_s");
    positive(eps_c, "eps_c");
    positive(eps_d, "eps_d");
    positive(g_c_m, "g_c");
    positive(g_s_m, "g_s");
    positive(units_per_meter, "units_per_meter");
    if (k < 1) throw UsageError("k must be >= 1");
    if (cqc_enabled && g_s_m > eps1_meters()) {
        throw UsageError("g_s must not exceed eps1 in meters; the CQC grid refines the error disc");
    }
    if (page_bytes == 0) throw UsageError("page size must be positive");
}

std::vector<StreamBatch> to_batches(const std::vector<Trajectory>& trajectories) {
    std::map<Timestamp, StreamBatch> by_t;
    for (const auto& tr : trajectories) {
        for (const auto& p : tr.points) {
            StreamBatch& b = by_t[p.t];
            b.t = p.t;
            if (!b.entries.emplace(tr.id, Point{p.x, p.y}).second) {
                throw DataError("trajectory " + std::to_string(tr.id) +
                                " has duplicate timestamp " + std::to_string(p.t));
            }
        }
    }
    std::vector<StreamBatch> out;
    out.reserve(by_t.size());
    for (auto& [t, b] : by_t) out.push_back(std::move(b));
    return out;
}

void validate_trajectories(const std::vector<Trajectory>& trajectories) {
    for (const auto& tr : trajectories) {
        if (tr.points.empty()) {
            throw DataError("trajectory " + std::to_string(tr.id) + " is empty");
        }
        Timestamp prev = 0;
        for (const auto& p : tr.points) {
            if (p.t < 1 || p.t <= prev) {
                throw DataError("trajectory " + std::to_string(tr.id) +
                                " has non-increasing or invalid timestamp");
            }
            if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
                throw DataError("trajectory " + std::to_string(tr.id) +
                                " has a non-finite coordinate");
            }
            prev = p.t;
        }
    }
}

} // namespace ppq
