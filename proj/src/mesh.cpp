#include "dgoc/mesh.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <stdexcept>

namespace dgoc {

namespace {

constexpr double kGeomTol = 1e-12;

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
}

// Fills element geometry and the full edge topology from vertices/elements.
void build_topology(Mesh& mesh) {
  mesh.edges.clear();
  mesh.element_edges.assign(mesh.elements.size(), {-1, -1, -1});
  std::map<std::pair<int, int>, int> lookup;

  mesh.h = 0.0;
  for (int t = 0; t < mesh.num_elements(); ++t) {
    Element& el = mesh.elements[t];
    const Point a = mesh.vertices[el.vertices[0]];
    const Point b = mesh.vertices[el.vertices[1]];
    const Point c = mesh.vertices[el.vertices[2]];
    el.area = signed_area(a, b, c);
    if (el.area <= 0.0)
      throw std::logic_error("element " + std::to_string(t) + " is not counterclockwise");
    el.diameter = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
    mesh.h = std::max(mesh.h, el.diameter);

    for (int j = 0; j < 3; ++j) {
      const int va = el.vertices[(j + 1) % 3];
      const int vb = el.vertices[(j + 2) % 3];
      const auto key = std::minmax(va, vb);
      auto it = lookup.find(key);
      if (it == lookup.end()) {
        // First visit comes from the lower element id, which becomes T+.
        Edge e;
        e.vertices = {va, vb};
        const Point d = mesh.vertices[vb] - mesh.vertices[va];
        e.length = d.norm();
        e.normal = Point(d.y(), -d.x()) / e.length;
        e.plus = t;
        const int id = static_cast<int>(mesh.edges.size());
        mesh.edges.push_back(e);
        lookup.emplace(key, id);
        mesh.element_edges[t][j] = id;
      } else {
        Edge& e = mesh.edges[it->second];
        if (e.minus >= 0) throw std::logic_error("edge shared by more than two elements");
        e.minus = t;
        mesh.element_edges[t][j] = it->second;
      }
    }
  }
  for (Edge& e : mesh.edges)
    e.kind = e.is_boundary() ? EdgeKind::boundary_outflow : EdgeKind::interior;
  mesh.edges_classified = false;
}

}  // namespace

SubdomainBox::SubdomainBox(double x0, double x1, double y0, double y1)
    : x_min(x0), x_max(x1), y_min(y0), y_max(y1) {
  if (!(x0 < x1) || !(y0 < y1))
    throw std::invalid_argument("SubdomainBox: need x_min < x_max and y_min < y_max");
  if (x0 < -kGeomTol || y0 < -kGeomTol || x1 > 1.0 + kGeomTol || y1 > 1.0 + kGeomTol)
    throw std::invalid_argument("SubdomainBox: box must lie in the unit square");
}

Point Mesh::centroid(int element) const {
  return (vertex(element, 0) + vertex(element, 1) + vertex(element, 2)) / 3.0;
}

Point Mesh::midpoint(int edge) const {
  const Edge& e = edges[edge];
  return 0.5 * (vertices[e.vertices[0]] + vertices[e.vertices[1]]);
}

int Mesh::neighbor(int element, int edge) const {
  const Edge& e = edges[edge];
  if (e.plus == element) return e.minus;
  if (e.minus == element) return e.plus;
  throw std::invalid_argument("edge is not incident to element");
}

Mesh build_unit_square_mesh() {
  Mesh mesh;
  mesh.vertices = {Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)};
  Element lower, upper;
  lower.vertices = {0, 1, 2};
  upper.vertices = {0, 2, 3};
  mesh.elements = {lower, upper};
  mesh.level = 0;
  build_topology(mesh);
  return mesh;
}

Mesh refine_uniform(const Mesh& mesh) {
  Mesh fine;
  fine.level = mesh.level + 1;
  const int nv = static_cast<int>(mesh.vertices.size());
  fine.vertices = mesh.vertices;
  fine.vertices.reserve(nv + mesh.edges.size());
  for (int e = 0; e < static_cast<int>(mesh.edges.size()); ++e) fine.vertices.push_back(mesh.midpoint(e));

  fine.elements.reserve(4 * mesh.elements.size());
  for (int t = 0; t < mesh.num_elements(); ++t) {
    const auto& v = mesh.elements[t].vertices;
    const auto& ed = mesh.element_edges[t];
    // Midpoint opposite local vertex j.
    const int m0 = nv + ed[0], m1 = nv + ed[1], m2 = nv + ed[2];
    const std::array<std::array<int, 3>, 4> children = {{
        {v[0], m2, m1},
        {m2, v[1], m0},
        {m1, m0, v[2]},
        {m0, m1, m2},
    }};
    for (const auto& c : children) {
      Element child;
      child.vertices = c;
      child.level = fine.level;
      fine.elements.push_back(child);
    }
  }
  build_topology(fine);
  return fine;
}

Mesh classify_edges(const Mesh& mesh, const VectorField& zeta) {
  Mesh out = mesh;
  for (int e = 0; e < static_cast<int>(out.edges.size()); ++e) {
    Edge& edge = out.edges[e];
    if (!edge.is_boundary()) continue;
    const double flux = zeta(out.midpoint(e)).dot(edge.normal);
    edge.kind = flux < 0.0 ? EdgeKind::boundary_inflow : EdgeKind::boundary_outflow;
  }
  out.edges_classified = true;
  return out;
}

Mesh build_mesh(int level) {
  if (level < 0) throw std::invalid_argument("build_mesh: negative level");
  Mesh mesh = build_unit_square_mesh();
  for (int k = 0; k < level; ++k) mesh = refine_uniform(mesh);
  return mesh;
}

std::vector<int> elements_in_box(const Mesh& mesh, const SubdomainBox& box) {
  std::vector<int> ids;
  for (int t = 0; t < mesh.num_elements(); ++t) {
    bool inside = true;
    for (int j = 0; j < 3 && inside; ++j) {
      const Point p = mesh.vertex(t, j);
      inside = p.x() >= box.x_min - kGeomTol && p.x() <= box.x_max + kGeomTol &&
               p.y() >= box.y_min - kGeomTol && p.y() <= box.y_max + kGeomTol;
    }
    if (inside) ids.push_back(t);
  }
  return ids;
}

void write_mesh_csv(const Mesh& mesh, std::ostream& out) {
  auto kind_name = [](EdgeKind k) {
    switch (k) {
      case EdgeKind::interior: return "interior";
      case EdgeKind::boundary_inflow: return "boundary_inflow";
      case EdgeKind::boundary_outflow: return "boundary_outflow";
    }
    return "unknown";
  };
  out.precision(17);
  out << "# vertices\nid,x,y\n";
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
    out << i << ',' << mesh.vertices[i].x() << ',' << mesh.vertices[i].y() << '\n';
  out << "# elements\nid,v0,v1,v2,area,diameter\n";
  for (std::size_t t = 0; t < mesh.elements.size(); ++t) {
    const Element& el = mesh.elements[t];
    out << t << ',' << el.vertices[0] << ',' << el.vertices[1] << ',' << el.vertices[2] << ','
        << el.area << ',' << el.diameter << '\n';
  }
  out << "# edges\nid,v0,v1,plus,minus,nx,ny,length,kind\n";
  for (std::size_t e = 0; e < mesh.edges.size(); ++e) {
    const Edge& ed = mesh.edges[e];
    out << e << ',' << ed.vertices[0] << ',' << ed.vertices[1] << ',' << ed.plus << ',' << ed.minus
        << ',' << ed.normal.x() << ',' << ed.normal.y() << ',' << ed.length << ','
        << kind_name(ed.kind) << '\n';
  }
}

}  // namespace dgoc
