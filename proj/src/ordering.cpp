#include "dgoc/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

namespace dgoc {

ElementPermutation::ElementPermutation(std::vector<int> o) : order(std::move(o)) {
  inverse.assign(order.size(), -1);
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const int t = order[pos];
    if (t < 0 || t >= static_cast<int>(order.size()) || inverse[t] >= 0)
      throw std::invalid_argument("ElementPermutation: not a bijection");
    inverse[t] = static_cast<int>(pos);
  }
}

ElementPermutation ElementPermutation::identity(int n) {
  std::vector<int> o(n);
  std::iota(o.begin(), o.end(), 0);
  return ElementPermutation(std::move(o));
}

ElementPermutation downwind_order(const Mesh& mesh, const VectorField& zeta) {
  constexpr double kFluxTol = 1e-14;
  const int n = mesh.num_elements();
  std::vector<std::vector<int>> downstream(n);
  std::vector<int> indegree(n, 0);
  for (int ei = 0; ei < static_cast<int>(mesh.edges.size()); ++ei) {
    const Edge& e = mesh.edges[ei];
    if (e.is_boundary()) continue;
    const double flux = zeta(mesh.midpoint(ei)).dot(e.normal) * e.length;
    if (std::abs(flux) <= kFluxTol) continue;
    const int from = flux > 0 ? e.plus : e.minus;
    const int to = flux > 0 ? e.minus : e.plus;
    downstream[from].push_back(to);
    ++indegree[to];
  }

  std::vector<int> order;
  order.reserve(n);
  std::vector<int> layer;
  for (int t = 0; t < n; ++t)
    if (indegree[t] == 0) layer.push_back(t);
  while (!layer.empty()) {
    std::sort(layer.begin(), layer.end());
    order.insert(order.end(), layer.begin(), layer.end());
    std::vector<int> next;
    for (int t : layer)
      for (int s : downstream[t])
        if (--indegree[s] == 0) next.push_back(s);
    layer.swap(next);
  }
  if (static_cast<int>(order.size()) != n) {
    const int left = n - static_cast<int>(order.size());
    throw OrderingCycleError("downwind_order: flux graph has a directed cycle (" +
                                 std::to_string(left) + " elements unplaced)",
                             left);
  }
  return ElementPermutation(std::move(order));
}

ElementPermutation reverse_order(const ElementPermutation& perm) {
  std::vector<int> o(perm.order.rbegin(), perm.order.rend());
  return ElementPermutation(std::move(o));
}

void write_permutation_csv(const ElementPermutation& perm, std::ostream& out) {
  out << "position,element\n";
  for (int i = 0; i < perm.size(); ++i) out << i << ',' << perm.order[i] << '\n';
}

}  // namespace dgoc
