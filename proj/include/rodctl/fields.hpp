#ifndef RODCTL_FIELDS_HPP
#define RODCTL_FIELDS_HPP

#include "rodctl/core.hpp"
#include "rodctl/mesh.hpp"

#include <vector>

namespace rodctl {

/// One rectangle of the (t, x) grid: time layer `layer` crossed with segment
/// `segment`. Arrays are P x P, rows index time, columns index x.
struct FieldBlock {
    int layer = 0;
    int segment = 0;
    Matrix v, r, vt, vx, p, s, e;
    Vector f;  ///< distributed force of the segment along the block's times
};

/// Fields sampled on t = i h, x = -1 + j h, stored block by block so that
/// every mesh line is a grid line.
struct FieldGrid {
    MeshConfig mesh;
    Index samples = 0;
    double step = 0.0;
    std::vector<FieldBlock> blocks;  ///< layer-major, segments ascending

    const FieldBlock& block(int layer, int segment) const {
        return blocks[static_cast<std::size_t>(layer * mesh.N + mesh.segment_position(segment))];
    }
    double time(int layer, Index i) const { return layer * mesh.lambda + double(i) * step; }
    double abscissa(int segment, Index j) const { return mesh.x(segment - 1) + double(j) * step; }
};

/// Composite Simpson over a P x P block with spacing h in both directions.
double simpson_2d(const Matrix& values, double step);

}  // namespace rodctl

#endif
