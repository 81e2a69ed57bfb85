#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "graphkam/detail/pchip.hpp"
#include "graphkam/errors.hpp"
#include "graphkam/graph.hpp"

namespace graphkam {

/// Convex superlinear edge Hamiltonian, represented through the data every
/// downstream solver actually consumes: the minimum level a_e and the
/// right-branch inverse sigma(a) with its derivative.  sigma is strictly
/// increasing and concave on [a_e, inf) with sigma(a)/a -> 0.
class EdgeHamiltonian {
  struct Quadratic {
    double theta, v;  // H(p) = (p - theta)^2 / 2 - v
  };
  struct Tabulated {
    double floor;
    detail::Pchip sigma;
  };
  struct Callable {
    double floor;
    std::function<double(double)> sigma;
    std::function<double(double)> dsigma;
    std::string tag;
  };

 public:
  static EdgeHamiltonian quadratic(double theta, double v) {
    EdgeHamiltonian h;
    h.data_ = Quadratic{theta, v};
    return h;
  }

  /// Monotone samples of sigma on an increasing a-grid starting at the floor.
  static EdgeHamiltonian tabulated(double a_floor, std::vector<double> a_samples,
                                   std::vector<double> sigma_samples) {
    if (a_samples.empty() || std::abs(a_samples.front() - a_floor) > 1e-9 * (1.0 + std::abs(a_floor)))
      fail(errc::bad_input, "tabulated samples must start at a_floor");
    for (size_t i = 0; i + 1 < sigma_samples.size(); ++i)
      if (!(sigma_samples[i + 1] > sigma_samples[i]))
        fail(errc::bad_input, "tabulated sigma must be strictly increasing");
    EdgeHamiltonian h;
    h.data_ = Tabulated{a_floor, detail::Pchip(std::move(a_samples), std::move(sigma_samples))};
    return h;
  }

  static EdgeHamiltonian from_functions(double a_floor, std::function<double(double)> sigma,
                                        std::function<double(double)> dsigma,
                                        std::string tag = "callable") {
    EdgeHamiltonian h;
    h.data_ = Callable{a_floor, std::move(sigma), std::move(dsigma), std::move(tag)};
    return h;
  }

  double a_floor() const {
    if (auto* q = std::get_if<Quadratic>(&data_)) return -q->v;
    if (auto* t = std::get_if<Tabulated>(&data_)) return t->floor;
    return std::get<Callable>(data_).floor;
  }

  /// Minimizer of H, i.e. sigma at the floor level.
  double p_min() const { return sigma(a_floor()); }

  double sigma(double a) const {
    double floor = a_floor();
    check_level(a, floor);
    if (auto* q = std::get_if<Quadratic>(&data_))
      return q->theta + std::sqrt(std::max(0.0, 2.0 * (a + q->v)));
    if (auto* t = std::get_if<Tabulated>(&data_)) return t->sigma(std::max(a, floor));
    return std::get<Callable>(data_).sigma(std::max(a, floor));
  }

  double dsigma_da(double a) const {
    double floor = a_floor();
    check_level(a, floor);
    if (auto* q = std::get_if<Quadratic>(&data_)) {
      double r = 2.0 * (a + q->v);
      return r <= 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / std::sqrt(r);
    }
    if (auto* t = std::get_if<Tabulated>(&data_)) return t->sigma.derivative(std::max(a, floor));
    return std::get<Callable>(data_).dsigma(std::max(a, floor));
  }

  std::string family() const {
    if (std::holds_alternative<Quadratic>(data_)) return "quadratic";
    if (std::holds_alternative<Tabulated>(data_)) return "tabulated";
    return std::get<Callable>(data_).tag;
  }

  std::optional<double> closed_form_lagrangian(double q) const {
    if (auto* qd = std::get_if<Quadratic>(&data_))
      return 0.5 * q * q + qd->theta * q + qd->v;
    return std::nullopt;
  }

  const std::optional<std::pair<double, double>> quadratic_params() const {
    if (auto* q = std::get_if<Quadratic>(&data_)) return std::make_pair(q->theta, q->v);
    return std::nullopt;
  }

 private:
  static void check_level(double a, double floor) {
    if (a < floor - 1e-12 * (1.0 + std::abs(floor)))
      fail(errc::below_floor, "level " + std::to_string(a) + " below floor " + std::to_string(floor));
  }

  std::variant<Quadratic, Tabulated, Callable> data_;
};

/// Lagrangian by conjugation of the right branch:
///     L(q) = max_{a >= a_e} (q sigma(a) - a),  q >= 0.
/// The maximizer solves q dsigma(a) = 1; located by doubling the bracket
/// until the slope turns, then a bisection/secant hybrid.
inline double lagrangian_numeric(const EdgeHamiltonian& h, double q) {
  if (q < 0.0) fail(errc::bad_input, "lagrangian defined for q >= 0; use the reverse branch");
  double floor = h.a_floor();
  if (q == 0.0) return -floor;

  double delta = 1e-12 * (1.0 + std::abs(floor));
  auto slope = [&](double a) { return q * h.dsigma_da(a) - 1.0; };

  double lo = floor + delta;
  if (slope(lo) <= 0.0) return q * h.sigma(floor) - floor;

  double step = std::max(1.0, std::abs(floor));
  double hi = floor + step;
  int doublings = 0;
  while (slope(hi) > 0.0) {
    step *= 2.0;
    hi = floor + step;
    if (++doublings > 200) fail(errc::non_convergence, "lagrangian bracket search");
  }

  double flo = slope(lo), fhi = slope(hi);
  for (int iter = 0; iter < 200; ++iter) {
    if (hi - lo <= 1e-12 * (1.0 + std::abs(hi))) break;
    // secant proposal, kept only when it lands well inside the bracket
    double mid = 0.5 * (lo + hi);
    if (std::isfinite(flo) && flo != fhi) {
      double s = lo + flo * (hi - lo) / (flo - fhi);
      if (s > lo + 0.1 * (hi - lo) && s < hi - 0.1 * (hi - lo)) mid = s;
    }
    double fm = slope(mid);
    if (fm > 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  double a_star = 0.5 * (lo + hi);
  return q * h.sigma(a_star) - a_star;
}

inline double lagrangian(const EdgeHamiltonian& h, double q) {
  if (auto closed = h.closed_form_lagrangian(q)) return *closed;
  return lagrangian_numeric(h, q);
}

/// Per-pair Hamiltonian data; branch storage parallels edge ids.
class GraphHamiltonian {
 public:
  static GraphHamiltonian from_branches(std::vector<EdgeHamiltonian> branches) {
    if (branches.size() % 2 != 0) fail(errc::bad_input, "branch count must be even");
    GraphHamiltonian g;
    g.branches_ = std::move(branches);
    for (size_t k = 0; k + 1 < g.branches_.size(); k += 2) {
      const auto& fwd = g.branches_[k];
      const auto& rev = g.branches_[k + 1];
      double af = fwd.a_floor(), ar = rev.a_floor();
      double scale = 1.0 + std::abs(af);
      if (std::abs(af - ar) > 1e-9 * scale)
        fail(errc::bad_input, "pair " + std::to_string(k / 2) + ": floors differ across reversal");
      double ps = fwd.sigma(af) + rev.sigma(af);
      if (std::abs(ps) > 1e-9 * (1.0 + std::abs(fwd.sigma(af))))
        fail(errc::bad_input, "pair " + std::to_string(k / 2) + ": sigma(a_e) != -sigma_rev(a_e)");
    }
    return g;
  }

  const EdgeHamiltonian& edge(EdgeId e) const { return branches_[static_cast<size_t>(e)]; }
  int pair_count() const { return static_cast<int>(branches_.size() / 2); }
  double a_floor(EdgeId e) const { return edge(e).a_floor(); }

 private:
  std::vector<EdgeHamiltonian> branches_;
};

/// H(e,p) = (p - theta_e)^2 / 2 - v_e per pair, with theta_{-e} = -theta_e and
/// v_{-e} = v_e, so the reversal symmetry holds by construction.
inline GraphHamiltonian quadratic_family(const Graph& g, const std::vector<double>& theta,
                                         const std::vector<double>& v) {
  if (static_cast<int>(theta.size()) != g.pair_count() ||
      static_cast<int>(v.size()) != g.pair_count())
    fail(errc::bad_input, "quadratic family needs one (theta, v) per pair");
  std::vector<EdgeHamiltonian> branches;
  branches.reserve(static_cast<size_t>(g.edge_count()));
  for (int k = 0; k < g.pair_count(); ++k) {
    branches.push_back(EdgeHamiltonian::quadratic(theta[static_cast<size_t>(k)], v[static_cast<size_t>(k)]));
    branches.push_back(EdgeHamiltonian::quadratic(-theta[static_cast<size_t>(k)], v[static_cast<size_t>(k)]));
  }
  return GraphHamiltonian::from_branches(std::move(branches));
}

/// a_0 = max_e a_e: the lowest level at which every edge can be evaluated.
inline double a0(const GraphHamiltonian& h) {
  double m = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < h.pair_count(); ++k)
    m = std::max(m, h.a_floor(Graph::forward_edge(k)));
  return m;
}

/// Hamiltonian shifted by a 1-cochain: sigma^w(e, a) = sigma(e, a) - w(e),
/// L^w(e, q) = L(e, q) - q w(e).  Floors are unchanged.
class OmegaHamiltonian {
 public:
  OmegaHamiltonian(GraphHamiltonian base, Cochain1 omega)
      : base_(std::move(base)), omega_(std::move(omega)) {
    if (omega_.pair_count() != base_.pair_count())
      fail(errc::bad_input, "cochain size does not match pair count");
  }

  double sigma(EdgeId e, double a) const { return base_.edge(e).sigma(a) - omega_(e); }
  double dsigma_da(EdgeId e, double a) const { return base_.edge(e).dsigma_da(a); }
  double a_floor(EdgeId e) const { return base_.a_floor(e); }
  double lagrangian(EdgeId e, double q) const {
    return graphkam::lagrangian(base_.edge(e), q) - q * omega_(e);
  }

  const GraphHamiltonian& base() const { return base_; }
  const Cochain1& omega() const { return omega_; }
  int pair_count() const { return base_.pair_count(); }

 private:
  GraphHamiltonian base_;
  Cochain1 omega_;
};

inline OmegaHamiltonian modify(const GraphHamiltonian& h, Cochain1 omega) {
  return OmegaHamiltonian(h, std::move(omega));
}

inline OmegaHamiltonian modify(const OmegaHamiltonian& h, const Cochain1& omega) {
  Cochain1 sum = h.omega();
  sum += omega;
  return OmegaHamiltonian(h.base(), std::move(sum));
}

inline double a0(const OmegaHamiltonian& h) { return a0(h.base()); }

}  // namespace graphkam
