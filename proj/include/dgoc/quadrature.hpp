#pragma once

#include <array>
#include <span>
#include <vector>

#include "dgoc/mesh.hpp"

namespace dgoc {

/// Triangle rule in barycentric coordinates; weights sum to 1 (scale by area).
struct TriangleRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
};

/// Gauss rule on [0,1]; weights sum to 1 (scale by length).
struct LineRule {
  std::vector<double> points;
  std::vector<double> weights;
};

const TriangleRule& triangle_rule_degree2();  // 3 points
const TriangleRule& triangle_rule_degree5();  // 7 points
const LineRule& gauss_line_2();
const LineRule& gauss_line_4();

/// Affine P1 data of one triangle: vertices, area, barycentric gradients.
struct ElementGeometry {
  std::array<Point, 3> vertices;
  std::array<Point, 3> grads;
  double area = 0.0;

  ElementGeometry(const Mesh& mesh, int element);

  Point map(const std::array<double, 3>& bary) const {
    return bary[0] * vertices[0] + bary[1] * vertices[1] + bary[2] * vertices[2];
  }
  /// Values of the three nodal basis functions at a physical point.
  std::array<double, 3> basis(const Point& x) const;
};

}  // namespace dgoc
