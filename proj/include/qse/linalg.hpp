#pragma once

#include "qse/types.hpp"

#include <vector>

namespace qse {

/// Eigendecomposition of a real symmetric 3x3 matrix with a deterministic
/// basis: eigenvalues descending; inside a degenerate cluster (gap <= tie_tol)
/// the basis is obtained by Gram-Schmidt on the projected x, y, z axes and
/// ordered lexicographically largest first; every column has its first
/// nonzero component positive except that the last column may be flipped to
/// make det = +1.
struct SymEigen3 {
    Vec3 values;   ///< descending
    Mat3 vectors;  ///< columns paired with values, det = +1
};

SymEigen3 canonical_eigh3(const Mat3& sym, double tie_tol = 1e-10);

/// Symmetric square root of a PSD 3x3 matrix (negative eigenvalues clipped).
Mat3 sqrtm_psd(const Mat3& sym);

/// Fibonacci lattice of n nearly uniform unit vectors. Deterministic.
std::vector<Vec3> fibonacci_sphere(int n);

/// Some unit vector orthogonal to n (n need not be normalized).
Vec3 any_orthogonal(const Vec3& n);

} // namespace qse
