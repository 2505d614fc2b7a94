#include "rodctl/exact.hpp"

#include <numeric>

namespace rodctl {

RrefResult rref_inplace(RationalMatrix& m, const std::vector<Index>& column_order) {
    RrefResult out;
    const Index rows = m.rows();
    const Index cols = m.cols();
    std::vector<Index> support;
    support.reserve(cols);
    Index r = 0;
    for (Index j : column_order) {
        if (r == rows) break;
        Index p = r;
        while (p < rows && m(p, j).is_zero()) ++p;
        if (p == rows) continue;
        if (p != r) m.row(p).swap(m.row(r));

        const Rational pivot = m(r, j);
        support.clear();
        for (Index c = 0; c < cols; ++c) {
            if (m(r, c).is_zero()) continue;
            m(r, c) /= pivot;
            support.push_back(c);
        }
        for (Index i = 0; i < rows; ++i) {
            if (i == r || m(i, j).is_zero()) continue;
            const Rational factor = m(i, j);
            for (Index c : support) m(i, c) -= factor * m(r, c);
        }
        out.pivot_columns.push_back(j);
        ++r;
    }
    out.rank = r;
    return out;
}

Index exact_rank(const RationalMatrix& m) {
    RationalMatrix work = m;
    std::vector<Index> order(m.cols());
    std::iota(order.begin(), order.end(), Index(0));
    return rref_inplace(work, order).rank;
}

RowBasis row_basis(const RationalMatrix& m) {
    // Column pivots of the transpose, tried left to right, are the first
    // independent rows; non-pivot columns of the RREF hold their coordinates.
    RationalMatrix work = m.transpose();
    std::vector<Index> order(work.cols());
    std::iota(order.begin(), order.end(), Index(0));
    const RrefResult rr = rref_inplace(work, order);

    RowBasis basis;
    basis.kept = rr.pivot_columns;
    std::vector<char> is_kept(m.rows(), 0);
    for (Index k : basis.kept) is_kept[k] = 1;
    for (Index i = 0; i < m.rows(); ++i)
        if (!is_kept[i]) basis.dropped.push_back(i);

    const Index kept = static_cast<Index>(basis.kept.size());
    basis.combination = RationalMatrix::Zero(m.rows(), kept);
    for (Index i = 0; i < m.rows(); ++i)
        for (Index b = 0; b < kept; ++b) basis.combination(i, b) = work(b, i);
    return basis;
}

}  // namespace rodctl
