#include "dgoc/quadrature.hpp"

#include <cmath>

namespace dgoc {

const TriangleRule& triangle_rule_degree2() {
  static const TriangleRule rule = [] {
    TriangleRule r;
    const double a = 2.0 / 3.0, b = 1.0 / 6.0;
    r.points = {{a, b, b}, {b, a, b}, {b, b, a}};
    r.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    return r;
  }();
  return rule;
}

// Dunavant, degree 5.
const TriangleRule& triangle_rule_degree5() {
  static const TriangleRule rule = [] {
    TriangleRule r;
    const double third = 1.0 / 3.0;
    const double a1 = 0.059715871789769820, b1 = 0.470142064105115090;
    const double a2 = 0.797426985353087322, b2 = 0.101286507323456339;
    const double w0 = 0.225, w1 = 0.132394152788506181, w2 = 0.125939180544827153;
    r.points = {{third, third, third}, {a1, b1, b1}, {b1, a1, b1}, {b1, b1, a1},
                {a2, b2, b2},          {b2, a2, b2}, {b2, b2, a2}};
    r.weights = {w0, w1, w1, w1, w2, w2, w2};
    return r;
  }();
  return rule;
}

const LineRule& gauss_line_2() {
  static const LineRule rule = [] {
    const double g = 0.5 / std::sqrt(3.0);
    return LineRule{{0.5 - g, 0.5 + g}, {0.5, 0.5}};
  }();
  return rule;
}

const LineRule& gauss_line_4() {
  static const LineRule rule = [] {
    const double x1 = 0.33998104358485626480, x2 = 0.86113631159405257522;
    const double w1 = 0.65214515486254614263, w2 = 0.34785484513745385737;
    return LineRule{{0.5 * (1 - x2), 0.5 * (1 - x1), 0.5 * (1 + x1), 0.5 * (1 + x2)},
                    {0.5 * w2, 0.5 * w1, 0.5 * w1, 0.5 * w2}};
  }();
  return rule;
}

ElementGeometry::ElementGeometry(const Mesh& mesh, int element) {
  for (int j = 0; j < 3; ++j) vertices[j] = mesh.vertex(element, j);
  area = mesh.elements[element].area;
  for (int j = 0; j < 3; ++j) {
    const Point& p = vertices[(j + 1) % 3];
    const Point& q = vertices[(j + 2) % 3];
    grads[j] = Point(p.y() - q.y(), q.x() - p.x()) / (2.0 * area);
  }
}

std::array<double, 3> ElementGeometry::basis(const Point& x) const {
  const Point d = x - vertices[0];
  return {1.0 + grads[0].dot(d), grads[1].dot(d), grads[2].dot(d)};
}

}  // namespace dgoc
