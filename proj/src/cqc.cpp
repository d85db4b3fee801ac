#include "ppq/cqc.hpp"

#include <cmath>

#include "ppq/errors.hpp"

namespace ppq {

void CqcCode::serialize(ByteWriter& w) const {
    if (quadrants.size() > 255) throw InvariantError("CQC code deeper than 255 levels");
    w.u8(static_cast<uint8_t>(quadrants.size()));
    BitWriter bw;
    for (uint8_t q : quadrants) bw.bits(q, 2);
    w.bytes(bw.data());
}

CqcCode CqcCode::deserialize(ByteReader& r) {
    CqcCode c;
    size_t levels = r.u8();
    std::vector<uint8_t> payload = r.bytes((levels * 2 + 7) / 8);
    BitReader br(payload);
    c.quadrants.reserve(levels);
    for (size_t i = 0; i < levels; ++i) {
        c.quadrants.push_back(static_cast<uint8_t>(br.bits(2)));
    }
    return c;
}

SubspaceCoord pad_sc(SubspaceCoord sc) {
    int ax = std::abs(sc.x), ay = std::abs(sc.y);
    if (ax == 1 && ay == 1) return sc;
    int side = 2 * ((std::max(ax, ay) + 1) / 2);
    return {sc.x < 0 ? -side : side, sc.y < 0 ? -side : side};
}

GridSpec GridSpec::make(double eps1_units, double gs_units) {
    if (!(eps1_units > 0.0) || !(gs_units > 0.0)) {
        throw UsageError("CQC grid needs positive eps1 and g_s");
    }
    int cells = static_cast<int>(std::ceil(2.0 * eps1_units / gs_units - 1e-12));
    if (cells < 1) cells = 1;
    // Odd cell count keeps the reference point at the center of the center
    // cell; with an even count it would sit on a cell corner and the
    // refinement bound would double.
    if (cells % 2 == 0) ++cells;
    return {eps1_units, gs_units, cells};
}

CoordinateQuadtree CoordinateQuadtree::build_grid(int width, int height) {
    if (width < 1 || height < 1) throw UsageError("grid dimensions must be >= 1");
    CoordinateQuadtree tree;
    tree.width_ = width;
    tree.height_ = height;

    Node root{};
    root.rx0 = 0; root.rx1 = width; root.ry0 = 0; root.ry1 = height;
    root.sc = {0, 0};
    root.children[0] = root.children[1] = root.children[2] = root.children[3] = -1;
    if (width == 1 && height == 1) {
        root.px0 = 0; root.px1 = 1; root.py0 = 0; root.py1 = 1;
        root.leaf = true;
        tree.padded_side_ = 1;
        tree.nodes_.push_back(root);
        return tree;
    }
    int side = 2 * ((std::max(width, height) + 1) / 2);
    root.px0 = 0; root.px1 = side; root.py0 = 0; root.py1 = side;
    root.leaf = false;
    tree.padded_side_ = side;
    tree.nodes_.push_back(root);

    // Iterative expansion; children are appended in quadrant order.
    std::vector<std::pair<int, size_t>> stack; // node index, depth
    stack.push_back({0, 0});
    while (!stack.empty()) {
        auto [ni, depth] = stack.back();
        stack.pop_back();
        tree.max_depth_ = std::max(tree.max_depth_, depth);
        Node parent = tree.nodes_[ni]; // copy: the vector may reallocate below
        if (parent.leaf) continue;
        int cx = (parent.px0 + parent.px1) / 2;
        int cy = (parent.py0 + parent.py1) / 2;
        for (int q = 0; q < 4; ++q) {
            bool left = (q == kUpperLeft || q == kLowerLeft);
            bool up = (q == kUpperLeft || q == kUpperRight);
            int qx0 = left ? parent.px0 : cx;
            int qx1 = left ? cx : parent.px1;
            int qy0 = up ? cy : parent.py0;
            int qy1 = up ? parent.py1 : cy;
            Node child{};
            child.rx0 = std::max(parent.rx0, qx0);
            child.rx1 = std::min(parent.rx1, qx1);
            child.ry0 = std::max(parent.ry0, qy0);
            child.ry1 = std::min(parent.ry1, qy1);
            if (child.rx1 <= child.rx0 || child.ry1 <= child.ry0) continue; // padding only
            int csx = child.rx1 - child.rx0;
            int csy = child.ry1 - child.ry0;
            child.sc = {left ? -csx : csx, up ? csy : -csy};
            child.children[0] = child.children[1] = child.children[2] = child.children[3] = -1;
            if (csx == 1 && csy == 1) {
                child.leaf = true;
                child.px0 = child.rx0; child.px1 = child.rx1;
                child.py0 = child.ry0; child.py1 = child.ry1;
            } else {
                child.leaf = false;
                // Padded square anchored on the real rect's center-facing
                // corner, extending in the quadrant direction, so it always
                // contains the real cells (pads point away from the center).
                int cside = 2 * ((std::max(csx, csy) + 1) / 2);
                child.px0 = left ? child.rx1 - cside : child.rx0;
                child.px1 = left ? child.rx1 : child.rx0 + cside;
                child.py0 = up ? child.ry0 : child.ry1 - cside;
                child.py1 = up ? child.ry0 + cside : child.ry1;
            }
            int ci = static_cast<int>(tree.nodes_.size());
            tree.nodes_.push_back(child);
            tree.nodes_[ni].children[q] = ci;
            stack.push_back({ci, depth + 1});
        }
    }
    return tree;
}

CqcCode CoordinateQuadtree::encode(int cx, int cy) const {
    if (cx < 0 || cx >= width_ || cy < 0 || cy >= height_) {
        throw UsageError("cell out of grid bounds");
    }
    CqcCode code;
    int ni = 0;
    while (!nodes_[ni].leaf) {
        const Node& n = nodes_[ni];
        int mx = (n.px0 + n.px1) / 2;
        int my = (n.py0 + n.py1) / 2;
        bool left = cx < mx;
        bool up = cy >= my;
        int q = up ? (left ? kUpperLeft : kUpperRight) : (left ? kLowerLeft : kLowerRight);
        int child = n.children[q];
        if (child < 0) throw InvariantError("real cell resolved to a padding subspace");
        code.quadrants.push_back(static_cast<uint8_t>(q));
        ni = child;
    }
    return code;
}

std::pair<int64_t, int64_t> CoordinateQuadtree::decode_half_units(const CqcCode& code) const {
    int ni = 0;
    for (uint8_t q : code.quadrants) {
        const Node& n = nodes_[ni];
        if (n.leaf) throw DataError("CQC code longer than tree depth");
        if (q > 3 || n.children[q] < 0) throw DataError("CQC code addresses a padding subspace");
        ni = n.children[q];
    }
    const Node& leaf = nodes_[ni];
    if (!leaf.leaf) throw DataError("CQC code stops at an internal node");
    // Leaf cell center relative to the padded root center, in half-cell units.
    // Summing the padded subspace coordinates along the path gives the same
    // value whenever the real cells of every visited subspace stay adjacent to
    // their quadrant center, but deep padding cascades can break that
    // adjacency; reading the leaf position off the template is exact for
    // every grid shape.
    return {2 * static_cast<int64_t>(leaf.rx0) + 1 - padded_side_,
            2 * static_cast<int64_t>(leaf.ry0) + 1 - padded_side_};
}

Point CoordinateQuadtree::decode(const CqcCode& code) const {
    auto [nx, ny] = decode_half_units(code);
    return {static_cast<double>(nx) / 2.0, static_cast<double>(ny) / 2.0};
}

CoordinateQuadtree build_coordinate_quadtree(double eps1_units, double gs_units) {
    GridSpec spec = GridSpec::make(eps1_units, gs_units);
    return CoordinateQuadtree::build_grid(spec.cells, spec.cells);
}

CqcCode center_cell_code(const CoordinateQuadtree& tree) {
    return tree.encode(tree.width() / 2, tree.height() / 2);
}

CqcCode encode_deviation(const Point& actual, const Point& reconstructed,
                         const CoordinateQuadtree& tree, double gs_units) {
    const int n = tree.width();
    // Grid centered so `actual` is the center of the center cell.
    double ox = actual.x - 0.5 * n * gs_units;
    double oy = actual.y - 0.5 * n * gs_units;
    auto cell_of = [&](double v, double o) {
        double u = (v - o) / gs_units;
        int i = static_cast<int>(std::floor(u));
        // the outer max edge is inclusive
        if (i == n && u <= n + 1e-9) i = n - 1;
        if (i == -1 && u >= -1e-9) i = 0;
        if (i < 0 || i >= n) {
            throw DataError("reconstruction deviates beyond the CQC grid; eps1 bound violated upstream");
        }
        return i;
    };
    return tree.encode(cell_of(reconstructed.x, ox), cell_of(reconstructed.y, oy));
}

Point refine_reconstruction(const Point& reconstructed, const CqcCode& cqc1,
                            const CqcCode& cqc2, const CoordinateQuadtree& tree,
                            double gs_units) {
    Point c1 = tree.decode(cqc1);
    Point c2 = tree.decode(cqc2);
    return reconstructed + (c1 - c2) * gs_units;
}

} // namespace ppq
