#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>

#include "surfkern/detail/reduce.hpp"
#include "surfkern/types.hpp"

namespace surfkern {

/// Discretized hypersurface in R^Dim: a set of oriented segments (Dim == 2)
/// or triangles (Dim == 3). Normals, measures, centroids and diameters are
/// derived from the element winding by build_surface(); treat instances as
/// immutable afterwards. All operations on meshes are pure functions, so
/// concurrent read-only use is safe.
template <int Dim>
struct SurfaceMesh {
  static_assert(Dim == 2 || Dim == 3, "ambient dimension must be 2 or 3");
  static constexpr int dimension = Dim;

  PointMatrix<Dim> vertices;
  ElementMatrix<Dim> elements;
  PointMatrix<Dim> normals;    // per-element unit normal
  VectorX measures;            // length (2D) or area (3D), strictly positive
  PointMatrix<Dim> centroids;  // vertex mean per element
  VectorX diameters;           // max pairwise vertex distance per element
  Real bbox_diagonal = 0.0;

  Index num_vertices() const { return vertices.rows(); }
  Index num_elements() const { return elements.rows(); }

  Vec<Dim> vertex(Index v) const { return vertices.row(v).transpose(); }
  Vec<Dim> normal(Index e) const { return normals.row(e).transpose(); }
  Vec<Dim> centroid(Index e) const { return centroids.row(e).transpose(); }
  Vec<Dim> element_vertex(Index e, int corner) const {
    return vertices.row(elements(e, corner)).transpose();
  }
};

struct OrientationReport {
  bool closed = false;      // every segment endpoint / triangle edge has
                            // exactly two incident elements
  bool consistent = false;  // two-element junctions are traversed in
                            // opposite directions
  Real signed_volume = 0.0;  // divergence-theorem volume; > 0 means outward
};

namespace detail {

constexpr Real kDegenerateRelTol = 1e-12;

template <int Dim>
Real bbox_diagonal_of(const PointMatrix<Dim>& vertices) {
  if (vertices.rows() == 0) return 0.0;
  const Vec<Dim> lo = vertices.colwise().minCoeff().transpose();
  const Vec<Dim> hi = vertices.colwise().maxCoeff().transpose();
  return (hi - lo).norm();
}

inline std::uint64_t undirected_edge_key(std::int32_t a, std::int32_t b) {
  const std::uint64_t lo = static_cast<std::uint32_t>(std::min(a, b));
  const std::uint64_t hi = static_cast<std::uint32_t>(std::max(a, b));
  return (hi << 32) | lo;
}

}  // namespace detail

/// Builds a mesh from vertex coordinates and element connectivity, deriving
/// normals from the winding: in 2D the normal of a directed segment d is
/// (d.y, -d.x)/|d| (outward for counterclockwise loops), in 3D the
/// normalized cross product of the edge vectors in winding order.
/// Rejects out-of-range or repeated indices and elements whose measure is
/// degenerate relative to the bounding-box diagonal. Non-manifold
/// connectivity is accepted; check_orientation() reports on it.
template <int Dim>
SurfaceMesh<Dim> build_surface(PointMatrix<Dim> vertices,
                               ElementMatrix<Dim> elements) {
  if (!vertices.allFinite())
    throw std::invalid_argument("build_surface: non-finite vertex coordinate");

  SurfaceMesh<Dim> mesh;
  mesh.bbox_diagonal = detail::bbox_diagonal_of<Dim>(vertices);
  mesh.vertices = std::move(vertices);
  mesh.elements = std::move(elements);

  const Index num_elements = mesh.elements.rows();
  const Index num_vertices = mesh.vertices.rows();
  mesh.normals.resize(num_elements, Dim);
  mesh.measures.resize(num_elements);
  mesh.centroids.resize(num_elements, Dim);
  mesh.diameters.resize(num_elements);

  for (Index e = 0; e < num_elements; ++e) {
    for (int k = 0; k < Dim; ++k) {
      const std::int32_t v = mesh.elements(e, k);
      if (v < 0 || v >= num_vertices)
        throw std::invalid_argument("build_surface: element " +
                                    std::to_string(e) +
                                    " references vertex " + std::to_string(v) +
                                    " out of range");
      for (int l = k + 1; l < Dim; ++l)
        if (v == mesh.elements(e, l))
          throw std::invalid_argument("build_surface: element " +
                                      std::to_string(e) +
                                      " repeats vertex " + std::to_string(v));
    }

    if constexpr (Dim == 2) {
      const Vec<2> p0 = mesh.element_vertex(e, 0);
      const Vec<2> p1 = mesh.element_vertex(e, 1);
      const Vec<2> d = p1 - p0;
      const Real length = d.norm();
      if (length <= detail::kDegenerateRelTol * mesh.bbox_diagonal)
        throw std::invalid_argument("build_surface: element " +
                                    std::to_string(e) +
                                    " is degenerate (zero length)");
      mesh.normals.row(e) = Vec<2>{d.y(), -d.x()}.transpose() / length;
      mesh.measures[e] = length;
      mesh.centroids.row(e) = (0.5 * (p0 + p1)).transpose();
      mesh.diameters[e] = length;
    } else {
      const Vec<3> p0 = mesh.element_vertex(e, 0);
      const Vec<3> p1 = mesh.element_vertex(e, 1);
      const Vec<3> p2 = mesh.element_vertex(e, 2);
      const Vec<3> cross = (p1 - p0).cross(p2 - p0);
      const Real doubled_area = cross.norm();
      if (0.5 * doubled_area <= detail::kDegenerateRelTol *
                                    mesh.bbox_diagonal * mesh.bbox_diagonal)
        throw std::invalid_argument("build_surface: element " +
                                    std::to_string(e) +
                                    " is degenerate (zero area)");
      mesh.normals.row(e) = cross.transpose() / doubled_area;
      mesh.measures[e] = 0.5 * doubled_area;
      mesh.centroids.row(e) = ((p0 + p1 + p2) / 3.0).transpose();
      mesh.diameters[e] = std::max({(p1 - p0).norm(), (p2 - p1).norm(),
                                    (p0 - p2).norm()});
    }
  }
  return mesh;
}

/// Sum of element measures: the total length (2D) or area (3D).
template <int Dim>
Real total_measure(const SurfaceMesh<Dim>& mesh) {
  std::vector<Real> terms(mesh.measures.data(),
                          mesh.measures.data() + mesh.measures.size());
  return detail::pairwise_sum(terms);
}

/// Reverses every element's winding and negates its stored normal; all other
/// fields are untouched. Involution: flip(flip(m)) is bit-identical to m.
template <int Dim>
SurfaceMesh<Dim> flip_orientation(SurfaceMesh<Dim> mesh) {
  mesh.elements = mesh.elements.rowwise().reverse().eval();
  mesh.normals = -mesh.normals;
  return mesh;
}

/// Reports closedness, winding consistency, and the divergence-theorem
/// signed volume (1/Dim) * sum <c_e, nu_e> a_e. Never throws: non-manifold
/// and open meshes are valid inputs and simply yield closed = false.
template <int Dim>
OrientationReport check_orientation(const SurfaceMesh<Dim>& mesh) {
  OrientationReport report;
  const Index num_elements = mesh.num_elements();

  if constexpr (Dim == 2) {
    // Junctions are vertices: a consistent closed curve enters and leaves
    // each of them exactly once.
    struct Incidence {
      int out = 0;
      int in = 0;
    };
    std::unordered_map<std::int32_t, Incidence> incidences;
    for (Index e = 0; e < num_elements; ++e) {
      incidences[mesh.elements(e, 0)].out += 1;
      incidences[mesh.elements(e, 1)].in += 1;
    }
    report.closed = num_elements > 0;
    report.consistent = true;
    for (const auto& [vertex, inc] : incidences) {
      if (inc.out + inc.in != 2) report.closed = false;
      if (inc.out + inc.in == 2 && !(inc.out == 1 && inc.in == 1))
        report.consistent = false;
    }
  } else {
    struct EdgeUse {
      int forward = 0;
      int backward = 0;
    };
    std::unordered_map<std::uint64_t, EdgeUse> edges;
    for (Index e = 0; e < num_elements; ++e) {
      for (int k = 0; k < 3; ++k) {
        const std::int32_t a = mesh.elements(e, k);
        const std::int32_t b = mesh.elements(e, (k + 1) % 3);
        EdgeUse& use = edges[detail::undirected_edge_key(a, b)];
        (a < b ? use.forward : use.backward) += 1;
      }
    }
    report.closed = num_elements > 0;
    report.consistent = true;
    for (const auto& [key, use] : edges) {
      const int count = use.forward + use.backward;
      if (count != 2) report.closed = false;
      if (count == 2 && !(use.forward == 1 && use.backward == 1))
        report.consistent = false;
    }
  }

  std::vector<Real> terms(static_cast<std::size_t>(num_elements));
  for (Index e = 0; e < num_elements; ++e)
    terms[static_cast<std::size_t>(e)] =
        mesh.centroid(e).dot(mesh.normal(e)) * mesh.measures[e];
  report.signed_volume = detail::pairwise_sum(terms) / static_cast<Real>(Dim);
  return report;
}

/// Runtime-dimensioned mesh as loaded from files.
using MeshAny = std::variant<SurfaceMesh<2>, SurfaceMesh<3>>;

inline int dimension_of(const MeshAny& mesh) {
  return std::visit([](const auto& m) { return m.dimension; }, mesh);
}

}  // namespace surfkern
