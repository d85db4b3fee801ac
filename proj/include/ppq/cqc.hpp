#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ppq/geometry.hpp"
#include "ppq/io.hpp"

namespace ppq {

/// Quadrant labels: 00 upper-left, 01 upper-right, 10 lower-left,
/// 11 lower-right (two bits per tree level, root to leaf).
enum Quadrant : uint8_t { kUpperLeft = 0, kUpperRight = 1, kLowerLeft = 2, kLowerRight = 3 };

/// Path of quadrant labels addressing one grid cell.
struct CqcCode {
    std::vector<uint8_t> quadrants; // each 0..3, root to leaf

    size_t levels() const { return quadrants.size(); }
    size_t bit_length() const { return quadrants.size() * 2; }
    bool operator==(const CqcCode& o) const { return quadrants == o.quadrants; }
    bool operator<(const CqcCode& o) const { return quadrants < o.quadrants; }

    /// Bit-packed, MSB first, preceded by a one-byte level count.
    void serialize(ByteWriter& w) const;
    static CqcCode deserialize(ByteReader& r);
};

/// Signed integer pair: magnitude is the real cell extent of a subspace per
/// axis, sign is the quadrant direction relative to the parent center.
struct SubspaceCoord {
    int x = 0;
    int y = 0;
    bool operator==(const SubspaceCoord& o) const { return x == o.x && y == o.y; }
};

/// SC of the padded (square, even-sided) subspace: identity for unit cells,
/// otherwise 2*ceil(max(|x|,|y|)/2) with the original signs.
SubspaceCoord pad_sc(SubspaceCoord sc);

/// Grid geometry of the CQC template: a square grid of `cells` cells per side
/// covering the eps1 error disc. The cell count is rounded up to odd so the
/// reference point sits at the center of the center cell.
struct GridSpec {
    double eps1_units = 0.0;
    double gs_units = 0.0;
    int cells = 1;

    static GridSpec make(double eps1_units, double gs_units);
};

/// Fixed template quadtree over a cell grid. Independent of any trajectory:
/// only (eps1, g_s), or an explicit grid size, determine it.
class CoordinateQuadtree {
public:
    struct Node {
        // real cell rectangle [rx0,rx1) x [ry0,ry1), global grid coordinates
        int rx0, rx1, ry0, ry1;
        // padded square [px0,px1) x [py0,py1); equals the real rect for leaves
        int px0, px1, py0, py1;
        SubspaceCoord sc;      // zero for the root
        int children[4];       // index per Quadrant, -1 when empty/absent
        bool leaf;
    };

    /// Builds the template for a width x height cell grid.
    static CoordinateQuadtree build_grid(int width, int height);

    int width() const { return width_; }
    int height() const { return height_; }
    /// Side of the padded root square (1 for a 1x1 grid).
    int padded_side() const { return padded_side_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    const Node& root() const { return nodes_.front(); }

    /// Root-to-leaf quadrant path of a real cell. Throws UsageError when the
    /// cell lies outside the grid.
    CqcCode encode(int cx, int cy) const;

    /// Offset of the addressed cell's center from the padded root center, in
    /// exact half-cell units (numerators over 2). Throws DataError when the
    /// code does not address a real cell.
    std::pair<int64_t, int64_t> decode_half_units(const CqcCode& code) const;

    /// decode_half_units as a floating-point offset in cell units, relative to
    /// the padded root center.
    Point decode(const CqcCode& code) const;

    size_t max_depth() const { return max_depth_; }

private:
    int width_ = 1, height_ = 1, padded_side_ = 1;
    size_t max_depth_ = 0;
    std::vector<Node> nodes_;
};

/// Template tree for the square grid covering the eps1 disc at cell size g_s
/// (both in coordinate units).
CoordinateQuadtree build_coordinate_quadtree(double eps1_units, double gs_units);

/// Code of the center cell: the fixed cqc1 shared by every original point.
CqcCode center_cell_code(const CoordinateQuadtree& tree);

/// Code of the cell containing the reconstructed point in the grid centered at
/// the actual point. Throws DataError when the gap exceeds the grid extent.
CqcCode encode_deviation(const Point& actual, const Point& reconstructed,
                         const CoordinateQuadtree& tree, double gs_units);

/// Eq-style refinement: reconstructed + g_s * (decode(cqc1) - decode(cqc2)).
Point refine_reconstruction(const Point& reconstructed, const CqcCode& cqc1,
                            const CqcCode& cqc2, const CoordinateQuadtree& tree,
                            double gs_units);

} // namespace ppq
