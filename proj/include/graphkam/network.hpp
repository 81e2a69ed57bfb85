#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "graphkam/detail/gauss_legendre.hpp"
#include "graphkam/detail/pchip.hpp"
#include "graphkam/errors.hpp"
#include "graphkam/graph.hpp"
#include "graphkam/hamiltonian.hpp"

namespace graphkam {

/// Scalar profile on [0, 1]: a constant or shape-preserving cubic through
/// uniformly spaced samples.
class Profile {
 public:
  static Profile constant(double v) {
    Profile p;
    p.constant_ = v;
    return p;
  }

  static Profile from_samples(std::vector<double> samples) {
    if (samples.empty()) fail(errc::bad_input, "profile needs at least one sample");
    if (samples.size() == 1) return constant(samples[0]);
    Profile p;
    std::vector<double> s(samples.size());
    for (size_t i = 0; i < samples.size(); ++i)
      s[i] = static_cast<double>(i) / static_cast<double>(samples.size() - 1);
    p.interp_ = detail::Pchip(std::move(s), std::move(samples));
    p.is_constant_ = false;
    return p;
  }

  double operator()(double s) const {
    double arg = flipped_ ? 1.0 - s : s;
    double v = is_constant_ ? constant_ : (*interp_)(arg);
    return negated_ ? -v : v;
  }
  bool is_constant() const { return is_constant_; }

  /// Profile s -> this(1 - s).
  Profile flipped() const {
    Profile p = *this;
    p.flipped_ = !p.flipped_;
    return p;
  }

  /// Profile s -> -this(s).
  Profile negated() const {
    Profile p = *this;
    p.negated_ = !p.negated_;
    return p;
  }

 private:
  bool is_constant_ = true;
  bool flipped_ = false;
  bool negated_ = false;
  double constant_ = 0.0;
  std::optional<detail::Pchip> interp_;
};

/// Quadratic-in-momentum arc Hamiltonian
///     H(s, p) = (p - theta(s))^2 / (2 m(s)) - v,
/// whose fiberwise minimum -v is constant in s by construction.  The reverse
/// arc is derived from the reversal symmetry H_rev(s, p) = H(1 - s, -p).
struct ArcHamiltonian {
  std::string name;
  std::string from;
  std::string to;
  Profile theta = Profile::constant(0.0);
  Profile mass = Profile::constant(1.0);
  double v = 0.0;

  double floor() const { return -v; }
};

/// theta_rev(s) = -theta(1 - s), m_rev(s) = m(1 - s); evaluated through the
/// forward profiles, never resampled.
inline ArcHamiltonian reverse_arc(const ArcHamiltonian& arc) {
  ArcHamiltonian rev = arc;
  rev.name = "-" + arc.name;
  rev.from = arc.to;
  rev.to = arc.from;
  rev.theta = arc.theta.flipped().negated();
  rev.mass = arc.mass.flipped();
  return rev;
}

/// Largest momentum on the level set: sigma+(s, a) = max{p : H(s, p) = a}.
inline double sigma_plus(const ArcHamiltonian& arc, double s, double a) {
  double floor = arc.floor();
  if (a < floor - 1e-12 * (1.0 + std::abs(floor)))
    fail(errc::below_floor, "level below the arc floor");
  double m = arc.mass(s);
  if (!(m > 0.0)) fail(errc::quadrature_failure, "mass profile must stay positive");
  return arc.theta(s) + std::sqrt(std::max(0.0, 2.0 * m * (a + arc.v)));
}

struct NetworkSpec {
  std::vector<std::string> vertices;
  std::vector<ArcHamiltonian> arcs;
};

struct CompiledNetwork {
  Graph graph;
  GraphHamiltonian hamiltonian;
};

/// Compiles arc Hamiltonians into graph edge Hamiltonians: for each arc,
/// sigma(e, a) is the s-integral of sigma+(s, a) by fixed-order
/// Gauss-Legendre quadrature, and dsigma/da integrates the level derivative
/// of the integrand.  The compiled pair inherits the arc floor.
inline CompiledNetwork compile_network(const NetworkSpec& spec, int quad_nodes = 32) {
  std::vector<EdgePairSpec> pairs;
  for (const auto& arc : spec.arcs) pairs.push_back(EdgePairSpec{arc.name, arc.from, arc.to});
  Graph graph = Graph::build(spec.vertices, pairs);

  detail::QuadratureRule rule = detail::gauss_legendre(quad_nodes);
  std::vector<EdgeHamiltonian> branches;
  for (const auto& arc : spec.arcs) {
    double floor = arc.floor();
    auto integrate = [rule](auto&& f) {
      double sum = 0.0;
      for (size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(rule.nodes[i]);
      if (!std::isfinite(sum)) fail(errc::quadrature_failure, "non-finite integrand");
      return sum;
    };
    auto make_branch = [&](const ArcHamiltonian& a) {
      auto sigma = [a, integrate](double level) {
        return integrate([&](double s) { return sigma_plus(a, s, level); });
      };
      auto dsigma = [a, integrate](double level) {
        return integrate([&](double s) {
          double m = a.mass(s);
          double r = 2.0 * m * (level + a.v);
          return r <= 0.0 ? std::numeric_limits<double>::infinity() : m / std::sqrt(r);
        });
      };
      return EdgeHamiltonian::from_functions(floor, sigma, dsigma, "compiled");
    };
    branches.push_back(make_branch(arc));
    branches.push_back(make_branch(reverse_arc(arc)));
  }
  return CompiledNetwork{std::move(graph), GraphHamiltonian::from_branches(std::move(branches))};
}

struct CompiledCheckReport {
  bool monotone = true;
  bool concave = true;
  bool sublinear = true;
  bool derivative_blowup = true;
  std::vector<std::string> violations;

  bool ok() const { return monotone && concave && sublinear && derivative_blowup; }
};

/// Grid verification of the structural properties a compiled branch must
/// satisfy: sigma strictly increasing and midpoint concave, sigma(a)/a
/// decaying over three decades, and dsigma/da growing as the level drops to
/// the floor.
inline CompiledCheckReport check_compiled(const EdgeHamiltonian& h) {
  CompiledCheckReport report;
  double floor = h.a_floor();
  double scale = 1.0 + std::abs(floor);

  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) grid.push_back(floor + scale * (0.05 + 0.25 * i));
  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!(h.sigma(grid[i + 1]) > h.sigma(grid[i]))) {
      report.monotone = false;
      report.violations.push_back("sigma not increasing near a=" + std::to_string(grid[i]));
    }
  }
  for (size_t i = 0; i + 2 < grid.size(); i += 2) {
    double mid = h.sigma(0.5 * (grid[i] + grid[i + 2]));
    double chord = 0.5 * (h.sigma(grid[i]) + h.sigma(grid[i + 2]));
    if (mid < chord - 1e-10 * (1.0 + std::abs(mid))) {
      report.concave = false;
      report.violations.push_back("midpoint concavity fails near a=" + std::to_string(grid[i]));
    }
  }
  double prev_ratio = std::numeric_limits<double>::infinity();
  for (int decade = 1; decade <= 3; ++decade) {
    double a = floor + scale * std::pow(10.0, decade + 1);
    double ratio = h.sigma(a) / a;
    if (std::abs(ratio) >= std::abs(prev_ratio) + 1e-12) {
      report.sublinear = false;
      report.violations.push_back("sigma(a)/a not decaying at a=" + std::to_string(a));
    }
    prev_ratio = ratio;
  }
  double prev = 0.0;
  for (int k = 1; k <= 6; ++k) {
    double d = h.dsigma_da(floor + scale * std::pow(10.0, -k));
    if (!(d > prev)) {
      report.derivative_blowup = false;
      report.violations.push_back("dsigma/da not growing toward the floor (k=" + std::to_string(k) + ")");
    }
    prev = d;
  }
  return report;
}

}  // namespace graphkam
