#include "dgoc/norms.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

#include "dgoc/quadrature.hpp"

namespace dgoc {

namespace {

double uh_value(const ElementGeometry& g, const Vector& uh, int t, const Point& x) {
  const auto lam = g.basis(x);
  return uh[3 * t] * lam[0] + uh[3 * t + 1] * lam[1] + uh[3 * t + 2] * lam[2];
}

Point uh_grad(const ElementGeometry& g, const Vector& uh, int t) {
  return uh[3 * t] * g.grads[0] + uh[3 * t + 1] * g.grads[1] + uh[3 * t + 2] * g.grads[2];
}

void check(const Mesh& mesh, const Vector& uh) {
  if (uh.size() != mesh.num_dofs()) throw std::invalid_argument("error norm: size mismatch");
}

double element_l2_sq(const Mesh& mesh, int t, const Vector& uh, const ScalarField& u) {
  const ElementGeometry g(mesh, t);
  const TriangleRule& rule = triangle_rule_degree5();
  double s = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const Point x = g.map(rule.points[q]);
    const double e = u(x) - uh_value(g, uh, t, x);
    s += rule.weights[q] * e * e;
  }
  return s * g.area;
}

double element_h1_sq(const Mesh& mesh, int t, const Vector& uh, const VectorField& du) {
  const ElementGeometry g(mesh, t);
  const TriangleRule& rule = triangle_rule_degree5();
  const Point gh = uh_grad(g, uh, t);
  double s = 0.0;
  for (std::size_t q = 0; q < rule.points.size(); ++q)
    s += rule.weights[q] * (du(g.map(rule.points[q])) - gh).squaredNorm();
  return s * g.area;
}

}  // namespace

FluxTerm parse_flux_term(const std::string& name) {
  if (name == "omitted") return FluxTerm::omitted;
  if (name == "discrete") return FluxTerm::discrete;
  if (name == "full") return FluxTerm::full;
  throw std::invalid_argument("unknown flux term '" + name + "'");
}

std::string flux_term_name(FluxTerm f) {
  switch (f) {
    case FluxTerm::omitted: return "omitted";
    case FluxTerm::discrete: return "discrete";
    case FluxTerm::full: return "full";
  }
  return "unknown";
}

double error_l2(const Mesh& mesh, const Vector& uh, const ScalarField& exact) {
  check(mesh, uh);
  double s = 0.0;
  for (int t = 0; t < mesh.num_elements(); ++t) s += element_l2_sq(mesh, t, uh, exact);
  return std::sqrt(s);
}

double error_broken_h1(const Mesh& mesh, const Vector& uh, const ExactSolution& exact) {
  check(mesh, uh);
  double s = 0.0;
  for (int t = 0; t < mesh.num_elements(); ++t) s += element_h1_sq(mesh, t, uh, exact.gradient);
  return std::sqrt(s);
}

EpsNormParts eps_norm_parts(const Mesh& mesh, const Vector& uh, const ExactSolution& exact,
                            const ProblemData& pd, const EpsNormOptions& opt) {
  check(mesh, uh);
  if (!mesh.edges_classified) throw std::invalid_argument("eps_norm_parts: edges not classified");
  EpsNormParts parts;
  double l2_sq = 0.0;
  for (int t = 0; t < mesh.num_elements(); ++t) {
    parts.d_sq += element_h1_sq(mesh, t, uh, exact.gradient);
    if (pd.tau_c_inv > 0.0) l2_sq += element_l2_sq(mesh, t, uh, exact.value);
  }
  parts.ar_sq = pd.tau_c_inv * l2_sq;

  const LineRule& rule = gauss_line_4();
  for (int ei = 0; ei < static_cast<int>(mesh.edges.size()); ++ei) {
    const Edge& e = mesh.edges[ei];
    const ElementGeometry gp(mesh, e.plus);
    const Point a = mesh.vertices[e.vertices[0]];
    const Point b = mesh.vertices[e.vertices[1]];
    const double np = e.normal.dot(uh_grad(gp, uh, e.plus));
    double avg_h = np;
    std::optional<ElementGeometry> gm;
    if (!e.is_boundary()) {
      gm.emplace(mesh, e.minus);
      avg_h = 0.5 * (np + e.normal.dot(uh_grad(*gm, uh, e.minus)));
    }
    double jump_sq = 0.0, avg_sq = 0.0, upwind_sq = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Point x = a + rule.points[q] * (b - a);
      const double w = rule.weights[q] * e.length;
      double jump;
      if (e.is_boundary())
        jump = exact.value(x) - uh_value(gp, uh, e.plus, x);
      else
        jump = -(uh_value(gp, uh, e.plus, x) - uh_value(*gm, uh, e.minus, x));
      double avg = 0.0;
      if (opt.flux == FluxTerm::discrete) avg = avg_h;
      if (opt.flux == FluxTerm::full) avg = e.normal.dot(exact.gradient(x)) - avg_h;
      jump_sq += w * jump * jump;
      avg_sq += w * avg * avg;
      upwind_sq += w * 0.5 * std::abs(pd.zeta(x).dot(e.normal)) * jump * jump;
    }
    parts.d_sq += jump_sq / e.length + e.length * avg_sq;
    parts.ar_sq += upwind_sq;
  }
  return parts;
}

double error_eps_norm(const Mesh& mesh, const Vector& uh, const ExactSolution& exact,
                      const ProblemData& pd, const EpsNormOptions& opt) {
  const EpsNormParts p = eps_norm_parts(mesh, uh, exact, pd, opt);
  return std::sqrt(pd.epsilon * p.d_sq + p.ar_sq);
}

double error_triple_norm(const Mesh& mesh, const Vector& uh, const ExactSolution& exact,
                         const ProblemData& pd, const EpsNormOptions& opt) {
  const double e1 = error_eps_norm(mesh, uh, exact, pd, opt);
  const double l2 = error_l2(mesh, uh, exact.value);
  return std::sqrt(pd.beta_half() * e1 * e1 + l2 * l2);
}

LocalError error_local(const Mesh& mesh, const Vector& uh, const ExactSolution& exact,
                       const SubdomainBox& box) {
  check(mesh, uh);
  LocalError out;
  const auto ids = elements_in_box(mesh, box);
  out.empty = ids.empty();
  double l2 = 0.0, h1 = 0.0;
  for (int t : ids) {
    l2 += element_l2_sq(mesh, t, uh, exact.value);
    h1 += element_h1_sq(mesh, t, uh, exact.gradient);
  }
  out.l2 = std::sqrt(l2);
  out.broken_h1 = std::sqrt(h1);
  return out;
}

std::vector<double> convergence_rates(const std::vector<double>& errors) {
  std::vector<double> r(errors.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 1; k < errors.size(); ++k)
    if (errors[k - 1] > 0.0 && errors[k] > 0.0) r[k] = std::log2(errors[k - 1] / errors[k]);
  return r;
}

std::vector<double> ErrorReport::column(double LevelErrors::*field) const {
  std::vector<double> c;
  c.reserve(levels.size());
  for (const auto& l : levels) c.push_back(l.*field);
  return c;
}

std::vector<double> ErrorReport::rates(double LevelErrors::*field) const {
  return convergence_rates(column(field));
}

}  // namespace dgoc
