#pragma once

#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "dgoc/mesh.hpp"

namespace dgoc {

/// order[position] = element id, inverse[element id] = position.
struct ElementPermutation {
  std::vector<int> order;
  std::vector<int> inverse;

  ElementPermutation() = default;
  explicit ElementPermutation(std::vector<int> order);

  int size() const { return static_cast<int>(order.size()); }
  static ElementPermutation identity(int n);
};

/// Thrown when the element flux graph has a directed cycle.
class OrderingCycleError : public std::runtime_error {
 public:
  OrderingCycleError(const std::string& what, int unplaced)
      : std::runtime_error(what), unplaced_(unplaced) {}
  int unplaced() const { return unplaced_; }

 private:
  int unplaced_;
};

/// Elements sorted so that every element comes after all elements that
/// send flux into it across a shared edge. Layered topological sort: layer 0
/// holds elements with no upwind neighbour, layer L those whose upwind
/// neighbours all sit in layers < L; ties inside a layer go by element id.
/// Edges with |∫_e zeta·n| <= 1e-14 impose no constraint.
ElementPermutation downwind_order(const Mesh& mesh, const VectorField& zeta);

/// Reversed sequence; the downwind order for -zeta.
ElementPermutation reverse_order(const ElementPermutation& perm);

void write_permutation_csv(const ElementPermutation& perm, std::ostream& out);

}  // namespace dgoc
