#pragma once

#include <Eigen/Core>

#include <cstdint>

namespace surfkern {

using Real = double;
using Index = Eigen::Index;

/// Point or direction in ambient dimension Dim.
template <int Dim>
using Vec = Eigen::Matrix<Real, Dim, 1>;

/// One point per row.
template <int Dim>
using PointMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Dim, Eigen::RowMajor>;

/// One element per row: Dim vertex indices (segment in 2D, triangle in 3D).
template <int Dim>
using ElementMatrix =
    Eigen::Matrix<std::int32_t, Eigen::Dynamic, Dim, Eigen::RowMajor>;

using VectorX = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

}  // namespace surfkern
