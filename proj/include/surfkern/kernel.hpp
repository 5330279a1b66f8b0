#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include "surfkern/detail/rng.hpp"
#include "surfkern/types.hpp"

namespace surfkern {

/// Arguments of one kernel evaluation: two surface points with their unit
/// normals.
template <int Dim>
struct KernelInput {
  Vec<Dim> x;
  Vec<Dim> nu_x;
  Vec<Dim> y;
  Vec<Dim> nu_y;
};

namespace detail {

constexpr Real kUnitNormTol = 1e-12;
constexpr Real kSeparationRelTol = 1e-14;

// |x - y|^(Dim+1) from the squared distance and distance.
template <int Dim>
inline Real distance_pow_np1(Real d2, Real d) {
  if constexpr (Dim == 2)
    return d2 * d;
  else
    return d2 * d2;
}

// |x - y|^Dim.
template <int Dim>
inline Real distance_pow_n(Real d2, Real d) {
  if constexpr (Dim == 2)
    return d2;
  else
    return d2 * d;
}

// Unchecked evaluation used by the quadrature loops, which guarantee
// separation by construction.
template <int Dim>
inline Real kernel_signed_raw(const Vec<Dim>& x, const Vec<Dim>& nu_x,
                              const Vec<Dim>& y, const Vec<Dim>& nu_y) {
  const Vec<Dim> diff = x - y;
  const Real d2 = diff.squaredNorm();
  const Real d = std::sqrt(d2);
  return diff.dot(nu_y) * -(diff.dot(nu_x)) / distance_pow_np1<Dim>(d2, d);
}

template <int Dim>
inline void require_unit(const Vec<Dim>& v, const char* name) {
  if (std::abs(v.squaredNorm() - 1.0) > 2.0 * kUnitNormTol)
    throw std::invalid_argument(std::string("kernel: ") + name +
                                " is not a unit vector");
}

template <int Dim>
inline void require_separated(const Vec<Dim>& x, const Vec<Dim>& y) {
  const Real scale = std::max({x.norm(), y.norm(), 1.0});
  if ((x - y).norm() < kSeparationRelTol * scale)
    throw std::domain_error("kernel: singular evaluation, points coincide");
}

}  // namespace detail

/// Signed kernel <x-y, nu_y> <y-x, nu_x> / |x-y|^(Dim+1). Symmetric under
/// swapping (x, nu_x) with (y, nu_y); even under flipping both normals, odd
/// under flipping one. Throws std::domain_error on (near-)coincident points.
template <int Dim>
Real kernel_signed(const KernelInput<Dim>& in) {
  detail::require_unit<Dim>(in.nu_x, "nu_x");
  detail::require_unit<Dim>(in.nu_y, "nu_y");
  detail::require_separated<Dim>(in.x, in.y);
  return detail::kernel_signed_raw<Dim>(in.x, in.nu_x, in.y, in.nu_y);
}

template <int Dim>
Real kernel_signed(const Vec<Dim>& x, const Vec<Dim>& nu_x, const Vec<Dim>& y,
                   const Vec<Dim>& nu_y) {
  return kernel_signed<Dim>({x, nu_x, y, nu_y});
}

/// |kernel_signed|; invariant under flipping either normal independently.
template <int Dim>
Real kernel_absolute(const KernelInput<Dim>& in) {
  return std::abs(kernel_signed<Dim>(in));
}

template <int Dim>
Real kernel_absolute(const Vec<Dim>& x, const Vec<Dim>& nu_x,
                     const Vec<Dim>& y, const Vec<Dim>& nu_y) {
  return kernel_absolute<Dim>({x, nu_x, y, nu_y});
}

/// Tangential Jacobian |<x-y, nu_y>| / |x-y|^Dim of the radial projection
/// y -> (y-x)/|y-x| restricted to the hyperplane orthogonal to nu_y.
template <int Dim>
Real radial_projection_jacobian(const Vec<Dim>& x, const Vec<Dim>& y,
                                const Vec<Dim>& nu_y) {
  detail::require_unit<Dim>(nu_y, "nu_y");
  detail::require_separated<Dim>(x, y);
  const Vec<Dim> diff = x - y;
  const Real d2 = diff.squaredNorm();
  const Real d = std::sqrt(d2);
  return std::abs(diff.dot(nu_y)) / detail::distance_pow_n<Dim>(d2, d);
}

/// Lebesgue volume of the unit ball in R^k.
inline Real unit_ball_volume(int k) {
  if (k < 1) throw std::invalid_argument("unit_ball_volume: k must be >= 1");
  switch (k) {
    case 1:
      return 2.0;
    case 2:
      return std::numbers::pi;
    case 3:
      return 4.0 * std::numbers::pi / 3.0;
    default:
      return std::pow(std::numbers::pi, 0.5 * k) /
             std::tgamma(0.5 * k + 1.0);
  }
}

/// An orthonormal basis of the hyperplane orthogonal to the unit vector nu,
/// as the columns of a Dim x (Dim-1) matrix.
template <int Dim>
Eigen::Matrix<Real, Dim, Dim - 1> tangent_basis(const Vec<Dim>& nu) {
  Eigen::Matrix<Real, Dim, Dim - 1> basis;
  if constexpr (Dim == 2) {
    basis.col(0) = Vec<2>{-nu.y(), nu.x()};
  } else {
    int smallest = 0;
    for (int k = 1; k < 3; ++k)
      if (std::abs(nu[k]) < std::abs(nu[smallest])) smallest = k;
    const Vec<3> axis = Vec<3>::Unit(smallest);
    basis.col(0) = nu.cross(axis).normalized();
    basis.col(1) = nu.cross(basis.col(0));
  }
  return basis;
}

/// Independent check of radial_projection_jacobian: differentiate the
/// normalized-direction map restricted to an orthonormal tangent basis at y
/// with central differences and return sqrt(det(D^T D)).
template <int Dim>
Real finite_difference_jacobian(const Vec<Dim>& x, const Vec<Dim>& y,
                                const Vec<Dim>& nu_y, Real step = 1e-5) {
  const Eigen::Matrix<Real, Dim, Dim - 1> tangent = tangent_basis<Dim>(nu_y);
  const auto project = [&x](const Vec<Dim>& p) -> Vec<Dim> {
    return (p - x).normalized();
  };
  Eigen::Matrix<Real, Dim, Dim - 1> derivative;
  for (int k = 0; k < Dim - 1; ++k) {
    const Vec<Dim> offset = step * tangent.col(k);
    derivative.col(k) = (project(y + offset) - project(y - offset)) /
                        (2.0 * step);
  }
  const Eigen::Matrix<Real, Dim - 1, Dim - 1> gram =
      derivative.transpose() * derivative;
  return std::sqrt(gram.determinant());
}

struct JacobianCheckReport {
  int dimension = 0;
  Index samples = 0;
  std::uint64_t seed = 0;
  Real max_relative_error = 0.0;
  Index failures = 0;  // samples with relative error above the tolerance
};

/// Compares the closed-form Jacobian against the finite-difference oracle on
/// random generic configurations (separated points, non-grazing normals).
template <int Dim>
JacobianCheckReport jacobian_check(Index samples, std::uint64_t seed,
                                   Real tolerance = 1e-6) {
  if (samples < 1)
    throw std::invalid_argument("jacobian_check: samples must be >= 1");
  detail::Rng rng(detail::splitmix64(seed) ^ static_cast<std::uint64_t>(Dim));
  JacobianCheckReport report;
  report.dimension = Dim;
  report.samples = samples;
  report.seed = seed;
  for (Index s = 0; s < samples; ++s) {
    Vec<Dim> x;
    Vec<Dim> y;
    Vec<Dim> nu;
    // Resample grazing or near-coincident configurations: they form the
    // measure-zero set where the Jacobian vanishes and relative error is
    // meaningless.
    do {
      for (int k = 0; k < Dim; ++k) {
        x[k] = rng.uniform(-1.0, 1.0);
        y[k] = rng.uniform(-1.0, 1.0);
      }
      nu = detail::unit_direction<Dim>(rng);
    } while ((x - y).norm() < 0.3 ||
             std::abs((x - y).normalized().dot(nu)) < 0.1);

    const Real formula = radial_projection_jacobian<Dim>(x, y, nu);
    const Real oracle = finite_difference_jacobian<Dim>(x, y, nu);
    const Real relative = std::abs(formula - oracle) / std::abs(oracle);
    report.max_relative_error = std::max(report.max_relative_error, relative);
    if (relative > tolerance) ++report.failures;
  }
  return report;
}

}  // namespace surfkern
