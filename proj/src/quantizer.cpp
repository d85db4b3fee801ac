#include "ppq/quantizer.hpp"

#include <cmath>
#include <limits>

#include "ppq/errors.hpp"

namespace ppq {

std::pair<uint32_t, double> nearest_codeword(const Codebook& codebook, const Point& e) {
    if (codebook.codewords.empty()) throw UsageError("empty codebook");
    uint32_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (uint32_t i = 0; i < codebook.codewords.size(); ++i) {
        double d = dist(codebook.codewords[i], e);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return {best, best_d};
}

std::map<TrajectoryId, uint32_t> incremental_quantize(
    const std::map<TrajectoryId, Point>& errors, Codebook& codebook, double eps1) {
    std::map<TrajectoryId, uint32_t> assignments;
    for (const auto& [id, e] : errors) { // std::map iterates in ascending id order
        if (!std::isfinite(e.x) || !std::isfinite(e.y)) {
            throw DataError("non-finite prediction error for trajectory " + std::to_string(id));
        }
        if (codebook.codewords.empty()) {
            codebook.codewords.push_back(e); // bootstrap
            assignments[id] = 0;
            continue;
        }
        auto [idx, d] = nearest_codeword(codebook, e);
        if (d > eps1) {
            codebook.codewords.push_back(e);
            idx = static_cast<uint32_t>(codebook.codewords.size() - 1);
        }
        assignments[id] = idx;
    }
    return assignments;
}

} // namespace ppq
