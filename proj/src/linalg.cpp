#include "qse/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace qse {

namespace {

void make_first_nonzero_positive(Eigen::Ref<Vec3> v) {
    for (int i = 0; i < 3; ++i) {
        if (std::abs(v(i)) > 1e-12) {
            if (v(i) < 0) v = -v;
            return;
        }
    }
}

bool lex_greater(const Vec3& x, const Vec3& y) {
    for (int i = 0; i < 3; ++i) {
        if (std::abs(x(i) - y(i)) > 1e-12) return x(i) > y(i);
    }
    return false;
}

} // namespace

SymEigen3 canonical_eigh3(const Mat3& sym, double tie_tol) {
    const Mat3 s = 0.5 * (sym + sym.transpose());
    Eigen::SelfAdjointEigenSolver<Mat3> es(s);
    SymEigen3 out;
    for (int i = 0; i < 3; ++i) {
        out.values(i) = es.eigenvalues()(2 - i);
        out.vectors.col(i) = es.eigenvectors().col(2 - i);
    }

    int start = 0;
    while (start < 3) {
        int end = start + 1;
        while (end < 3 && out.values(end - 1) - out.values(end) <= tie_tol) ++end;
        if (end - start > 1) {
            // Rebuild the cluster basis from the projected coordinate axes.
            const Mat3 basis = out.vectors.middleCols(start, end - start) *
                               out.vectors.middleCols(start, end - start).transpose();
            std::vector<Vec3> picked;
            for (int axis = 0; axis < 3 && static_cast<int>(picked.size()) < end - start; ++axis) {
                Vec3 v = basis.col(axis);
                for (const auto& p : picked) v -= p.dot(v) * p;
                if (v.norm() > 1e-3) picked.push_back(v.normalized());
            }
            for (auto& p : picked) make_first_nonzero_positive(p);
            std::sort(picked.begin(), picked.end(), lex_greater);
            // Re-orthonormalize after reordering so that rounding stays symmetric.
            for (std::size_t k = 0; k < picked.size(); ++k) {
                Vec3 v = picked[k];
                for (std::size_t m = 0; m < k; ++m) v -= picked[m].dot(v) * picked[m];
                picked[k] = v.normalized();
            }
            const double mean = out.values.segment(start, end - start).mean();
            for (int k = start; k < end; ++k) {
                out.vectors.col(k) = picked[k - start];
                out.values(k) = mean;
            }
        } else {
            Vec3 v = out.vectors.col(start);
            make_first_nonzero_positive(v);
            out.vectors.col(start) = v;
        }
        start = end;
    }
    if (out.vectors.determinant() < 0) out.vectors.col(2) = -out.vectors.col(2);
    return out;
}

Mat3 sqrtm_psd(const Mat3& sym) {
    Eigen::SelfAdjointEigenSolver<Mat3> es(0.5 * (sym + sym.transpose()));
    const Vec3 root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

std::vector<Vec3> fibonacci_sphere(int n) {
    std::vector<Vec3> pts;
    pts.reserve(static_cast<std::size_t>(std::max(n, 0)));
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / n;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * i;
        pts.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
    }
    return pts;
}

Vec3 any_orthogonal(const Vec3& n) {
    const Vec3 u = n.normalized();
    Vec3 axis = Vec3::UnitX();
    if (std::abs(u.x()) > 0.6) axis = Vec3::UnitY();
    return (axis - axis.dot(u) * u).normalized();
}

} // namespace qse
