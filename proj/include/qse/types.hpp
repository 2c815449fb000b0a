#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string_view>

namespace qse {

using cplx = std::complex<double>;

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec2c = Eigen::Vector2cd;
using Mat2c = Eigen::Matrix2cd;
using Mat4c = Eigen::Matrix4cd;

enum class Party { Alice, Bob };

constexpr Party other(Party p) noexcept {
    return p == Party::Alice ? Party::Bob : Party::Alice;
}

constexpr std::string_view to_string(Party p) noexcept {
    return p == Party::Alice ? "alice" : "bob";
}

} // namespace qse
