#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <vector>

#include <Eigen/Core>

namespace dgoc {

using Point = Eigen::Vector2d;
using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Point(const Point&)>;

/// Triangle with counterclockwise vertices.
struct Element {
  std::array<int, 3> vertices{};
  double diameter = 0.0;  // longest edge
  double area = 0.0;
  int level = 0;
};

enum class EdgeKind { interior, boundary_inflow, boundary_outflow };

/// Mesh edge with a fixed unit normal. The normal points out of `plus` and
/// into `minus`; boundary edges have minus == -1 and an outward normal.
struct Edge {
  std::array<int, 2> vertices{};
  Point normal = Point::Zero();
  int plus = -1;
  int minus = -1;
  double length = 0.0;
  EdgeKind kind = EdgeKind::interior;

  bool is_boundary() const { return minus < 0; }
  bool is_inflow() const { return kind == EdgeKind::boundary_inflow; }
};

/// Axis-aligned closed box used to restrict error integrals.
struct SubdomainBox {
  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;

  SubdomainBox() = default;
  SubdomainBox(double x0, double x1, double y0, double y1);
};

/// Conforming triangulation of the unit square.
///
/// `element_edges[t][j]` is the edge of element t opposite its local vertex j.
/// Boundary edges stay `boundary_outflow` until classify_edges() is called
/// with a convection field.
struct Mesh {
  std::vector<Point> vertices;
  std::vector<Element> elements;
  std::vector<Edge> edges;
  std::vector<std::array<int, 3>> element_edges;
  double h = 0.0;
  int level = 0;
  bool edges_classified = false;

  int num_elements() const { return static_cast<int>(elements.size()); }
  int num_dofs() const { return 3 * num_elements(); }

  Point vertex(int element, int local) const {
    return vertices[elements[element].vertices[local]];
  }
  Point centroid(int element) const;
  Point midpoint(int edge) const;
  /// Element on the other side of `edge` from `element`, or -1.
  int neighbor(int element, int edge) const;
};

Mesh build_unit_square_mesh();
Mesh refine_uniform(const Mesh& mesh);
Mesh classify_edges(const Mesh& mesh, const VectorField& zeta);

/// Builds level-0 and refines `level` times.
Mesh build_mesh(int level);

/// Elements whose closed triangle lies in the closed box.
std::vector<int> elements_in_box(const Mesh& mesh, const SubdomainBox& box);

/// CSV dump with `vertices`, `elements` and `edges` sections.
void write_mesh_csv(const Mesh& mesh, std::ostream& out);

}  // namespace dgoc
