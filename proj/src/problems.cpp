#include "dgoc/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dgoc {

double ProblemData::beta_half() const { return std::sqrt(beta); }

void ProblemData::validate() const {
  if (!(epsilon >= 0.0)) throw std::invalid_argument("ProblemData: epsilon must be >= 0");
  if (!(beta >= 0.0)) throw std::invalid_argument("ProblemData: beta must be >= 0");
  if (!(sigma > 0.0)) throw std::invalid_argument("ProblemData: sigma must be > 0");
  if (!(tau_c_inv >= 0.0)) throw std::invalid_argument("ProblemData: tau_c_inv must be >= 0");
}

ProblemData make_problem_data(double epsilon, double beta, const Point& zeta, double gamma,
                              double sigma) {
  ProblemData pd;
  pd.epsilon = epsilon;
  pd.beta = beta;
  pd.zeta = [zeta](const Point&) { return zeta; };
  pd.gamma = [gamma](const Point&) { return gamma; };
  pd.sigma = sigma;
  pd.tau_c_inv = std::abs(gamma);
  if (gamma > 0.0) pd.gamma0 = gamma;
  pd.validate();
  return pd;
}

ExampleId parse_example(const std::string& name) {
  if (name == "smooth") return ExampleId::smooth;
  if (name == "boundary-layer" || name == "boundary_layer") return ExampleId::boundary_layer;
  if (name == "interior-layer" || name == "interior_layer") return ExampleId::interior_layer;
  throw std::invalid_argument("unknown example '" + name + "'");
}

std::string example_name(ExampleId id) {
  switch (id) {
    case ExampleId::smooth: return "smooth";
    case ExampleId::boundary_layer: return "boundary-layer";
    case ExampleId::interior_layer: return "interior-layer";
  }
  return "unknown";
}

namespace {

constexpr double kPi = std::numbers::pi;

ExactSolution bubble() {
  return {
      [](const Point& x) { return x.x() * (1 - x.x()) * x.y() * (1 - x.y()); },
      [](const Point& x) {
        return Point((1 - 2 * x.x()) * x.y() * (1 - x.y()), x.x() * (1 - x.x()) * (1 - 2 * x.y()));
      },
      [](const Point& x) { return -2 * x.y() * (1 - x.y()) - 2 * x.x() * (1 - x.x()); },
  };
}

ExactSolution sine_product() {
  return {
      [](const Point& x) { return std::sin(2 * kPi * x.x()) * std::sin(2 * kPi * x.y()); },
      [](const Point& x) {
        return Point(2 * kPi * std::cos(2 * kPi * x.x()) * std::sin(2 * kPi * x.y()),
                     2 * kPi * std::sin(2 * kPi * x.x()) * std::cos(2 * kPi * x.y()));
      },
      [](const Point& x) {
        return -8 * kPi * kPi * std::sin(2 * kPi * x.x()) * std::sin(2 * kPi * x.y());
      },
  };
}

// eta(z) = z^3 - (e^{(z-1)/eps} - e^{-1/eps}) / (1 - e^{-1/eps}) and its
// first two derivatives. Exponents are never positive on [0,1].
struct LayerProfile {
  double eps;
  double denom;  // 1 - e^{-1/eps}
  double tail;   // e^{-1/eps}

  explicit LayerProfile(double e) : eps(e), denom(-std::expm1(-1.0 / e)), tail(std::exp(-1.0 / e)) {}

  double value(double z) const { return z * z * z - (std::exp((z - 1) / eps) - tail) / denom; }
  double d1(double z) const { return 3 * z * z - std::exp((z - 1) / eps) / (eps * denom); }
  double d2(double z) const { return 6 * z - std::exp((z - 1) / eps) / (eps * eps * denom); }
};

ExactSolution layer_state(double eps) {
  const LayerProfile eta(eps);
  return {
      [eta](const Point& x) { return eta.value(x.x()) * eta.value(x.y()); },
      [eta](const Point& x) {
        return Point(eta.d1(x.x()) * eta.value(x.y()), eta.value(x.x()) * eta.d1(x.y()));
      },
      [eta](const Point& x) {
        return eta.d2(x.x()) * eta.value(x.y()) + eta.value(x.x()) * eta.d2(x.y());
      },
  };
}

ExactSolution layer_adjoint(double eps) {
  const LayerProfile eta(eps);
  return {
      [eta](const Point& x) { return eta.value(1 - x.x()) * eta.value(1 - x.y()); },
      [eta](const Point& x) {
        return Point(-eta.d1(1 - x.x()) * eta.value(1 - x.y()),
                     -eta.value(1 - x.x()) * eta.d1(1 - x.y()));
      },
      [eta](const Point& x) {
        return eta.d2(1 - x.x()) * eta.value(1 - x.y()) + eta.value(1 - x.x()) * eta.d2(1 - x.y());
      },
  };
}

// y = (1 - x1)^3 atan((x2 - 1/2)/eps)
ExactSolution arctan_layer(double eps) {
  return {
      [eps](const Point& x) {
        const double c = 1 - x.x();
        return c * c * c * std::atan((x.y() - 0.5) / eps);
      },
      [eps](const Point& x) {
        const double c = 1 - x.x();
        const double s = (x.y() - 0.5) / eps;
        return Point(-3 * c * c * std::atan(s), c * c * c / (eps * (1 + s * s)));
      },
      [eps](const Point& x) {
        const double c = 1 - x.x();
        const double s = (x.y() - 0.5) / eps;
        const double q = 1 + s * s;
        return 6 * c * std::atan(s) - c * c * c * 2 * s / (eps * eps * q * q);
      },
  };
}

}  // namespace

ExampleSpec example_spec(ExampleId id, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("example_spec: epsilon must be > 0");
  ExampleSpec spec;
  spec.id = id;
  spec.name = example_name(id);
  switch (id) {
    case ExampleId::smooth:
      spec.zeta = Point(1.0, 0.0);
      spec.y = bubble();
      spec.p = sine_product();
      break;
    case ExampleId::boundary_layer:
      spec.zeta = Point(std::sqrt(2.0) / 2, std::sqrt(2.0) / 2);
      spec.y = layer_state(epsilon);
      spec.p = layer_adjoint(epsilon);
      break;
    case ExampleId::interior_layer:
      spec.zeta = Point(1.0, 0.0);
      spec.y = arctan_layer(epsilon);
      spec.p = bubble();
      break;
  }
  return spec;
}

ManufacturedProblem manufacture_rhs(const ExampleSpec& spec, const ProblemData& pd) {
  ManufacturedProblem mp;
  mp.name = spec.name;
  mp.p = spec.p;
  mp.y = spec.y;
  const double bh = pd.beta_half();
  const double eps = pd.epsilon;
  const auto p = spec.p;
  const auto y = spec.y;
  const auto zeta = pd.zeta;
  const auto gamma = pd.gamma;
  const auto div_zeta = pd.zeta_divergence;
  mp.f = [=](const Point& x) {
    const double pv = p.value(x);
    const double div_flux = zeta(x).dot(p.gradient(x)) + div_zeta(x) * pv;
    return bh * (-eps * p.laplacian(x) - div_flux + gamma(x) * pv) - y.value(x);
  };
  mp.g = [=](const Point& x) {
    const double yv = y.value(x);
    return p.value(x) + bh * (-eps * y.laplacian(x) + zeta(x).dot(y.gradient(x)) + gamma(x) * yv);
  };
  mp.dirichlet_p = p.value;
  mp.dirichlet_y = y.value;
  return mp;
}

std::pair<Vector, Vector> to_original_variables(const Vector& p_tilde, const Vector& y_tilde,
                                                double beta) {
  const double q = std::pow(beta, 0.25);
  return {q * p_tilde, y_tilde / q};
}

}  // namespace dgoc
