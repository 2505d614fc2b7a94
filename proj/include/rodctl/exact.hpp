#ifndef RODCTL_EXACT_HPP
#define RODCTL_EXACT_HPP

#include "rodctl/core.hpp"

#include <vector>

namespace rodctl {

struct RrefResult {
    std::vector<Index> pivot_columns;  ///< in pivot order; row i of the result pivots on pivot_columns[i]
    Index rank = 0;
};

/// Reduced row echelon form in exact arithmetic. Pivot columns are tried in
/// the given order (columns not listed never pivot). The pivot row is scaled
/// to 1 and the column cleared above and below.
RrefResult rref_inplace(RationalMatrix& m, const std::vector<Index>& column_order);

/// Rank over the rationals.
Index exact_rank(const RationalMatrix& m);

/// Greedy row basis: the first rows (in order) that are linearly independent.
/// `combination` expresses every row as a combination of the kept rows,
/// shape rows() x kept.size().
struct RowBasis {
    std::vector<Index> kept;
    std::vector<Index> dropped;
    RationalMatrix combination;
};

RowBasis row_basis(const RationalMatrix& m);

}  // namespace rodctl

#endif
