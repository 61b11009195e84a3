#pragma once

#include <Eigen/Dense>

#include "dgff/lattice.hpp"

namespace oracle {

// 4(4I − A)⁻¹ from the adjacency of the domain, by dense LU.
inline Eigen::MatrixXd green(const dgff::LatticeDomain& d)
{
    const auto n = static_cast<Eigen::Index>(d.size());
    Eigen::MatrixXd M = 4.0 * Eigen::MatrixXd::Identity(n, n);
    for (std::size_t i = 0; i < d.size(); ++i)
        for (const auto& e : dgff::kNeighborOffsets) {
            int j = d.index(d.vertex(i) + e);
            if (j >= 0) M(static_cast<Eigen::Index>(i), j) -= 1.0;
        }
    return 4.0 * M.partialPivLu().inverse();
}

} // namespace oracle
