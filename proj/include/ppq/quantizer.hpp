#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "ppq/geometry.hpp"
#include "ppq/types.hpp"

namespace ppq {

/// Append-only set of 2-D error codewords. Indices are stable for the life of
/// a run, so historical assignments keep satisfying the eps1 bound.
struct Codebook {
    std::vector<Point> codewords;

    size_t size() const { return codewords.size(); }
    const Point& operator[](size_t i) const { return codewords[i]; }
};

/// Index of the codeword nearest to e plus its distance; ties break to the
/// lowest index. Throws UsageError on an empty codebook.
std::pair<uint32_t, double> nearest_codeword(const Codebook& codebook, const Point& e);

/// Assigns every error to a codeword within eps1, appending the error itself
/// as a new codeword when no existing one is close enough. Processes errors in
/// ascending trajectory-id order. Throws DataError on a non-finite error.
std::map<TrajectoryId, uint32_t> incremental_quantize(
    const std::map<TrajectoryId, Point>& errors, Codebook& codebook, double eps1);

} // namespace ppq
