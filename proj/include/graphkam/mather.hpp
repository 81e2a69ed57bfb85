#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "graphkam/circuits.hpp"
#include "graphkam/detail/simplex_lp.hpp"
#include "graphkam/errors.hpp"
#include "graphkam/graph.hpp"
#include "graphkam/hamiltonian.hpp"
#include "graphkam/homology.hpp"
#include "graphkam/measures.hpp"
#include "graphkam/weak_kam.hpp"

namespace graphkam {

struct MatherOptions {
  WeakKamOptions wk;
  double action_tol = 1e-8;      // which candidate measures count as minimizing
  double root_tol = 1e-12;       // per-circuit level root find
  double gap_tol = 1e-7;         // duality gap accepted by beta
  double q_min_tol = 1e-6;       // vanishing-speed threshold for minimizer test
  int beta_max_iters = 600;
  std::size_t circuit_cap = 1'000'000;
};

/// Minimal average action at cohomology c, computed as the critical value of
/// the modified Hamiltonian.
inline double alpha(const Graph& g, const GraphHamiltonian& h, const std::vector<double>& c,
                    const HomologyBasis& basis, const MatherOptions& opts = {}) {
  return critical_value(g, modify(h, representative_cochain(g, c, basis)), opts.wk);
}

/// Level at which a circuit's intrinsic length turns nonnegative:
/// inf { a >= max floor : sigma^w(xi, a) >= 0 }.
inline double circuit_level(const OmegaHamiltonian& h, const Path& circuit,
                            double root_tol = 1e-12) {
  double lo = -std::numeric_limits<double>::infinity();
  for (EdgeId e : circuit.edges) lo = std::max(lo, h.a_floor(e));
  if (intrinsic_length(h, circuit, lo) >= 0.0) return lo;
  double step = std::max(1.0, std::abs(lo));
  double hi = lo + step;
  int doublings = 0;
  while (intrinsic_length(h, circuit, hi) < 0.0) {
    lo = hi;
    step *= 2.0;
    hi += step;
    if (++doublings > 200) fail(errc::non_convergence, "circuit level search");
  }
  while (hi - lo > root_tol * (1.0 + std::abs(hi))) {
    double mid = 0.5 * (lo + hi);
    (intrinsic_length(h, circuit, mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Independent route to alpha: the worst circuit decides.  Every cycle is a
/// circuit sum, so no negative cycle exists exactly above the largest
/// circuit level; equilibrium circuits contribute their floor, hence the a0
/// seed.
inline double alpha_circuit_oracle(const Graph& g, const GraphHamiltonian& h,
                                   const std::vector<double>& c, const HomologyBasis& basis,
                                   const MatherOptions& opts = {}) {
  OmegaHamiltonian hw = modify(h, representative_cochain(g, c, basis));
  double level = a0(h);
  for (const Path& circuit : enumerate_circuits(g, CircuitEnumOptions{false, opts.circuit_cap}))
    level = std::max(level, circuit_level(hw, circuit, opts.root_tol));
  return level;
}

/// Action of a measure under the modified Lagrangian.
inline double action(const OmegaHamiltonian& h, const FiniteMeasure& mu) {
  return integrate(mu, [&](EdgeId e, double q) { return h.lagrangian(e, q); });
}

/// Action under the unmodified Lagrangian.
inline double action(const GraphHamiltonian& h, const FiniteMeasure& mu) {
  return integrate(mu, [&](EdgeId e, double q) { return lagrangian(h.edge(e), q); });
}

struct MatherSolution {
  std::vector<double> c;
  double alpha = 0.0;
  WeakKamResult weak_kam;
  std::vector<std::pair<EdgeId, double>> mather_set;    // graph of Q over the Aubry set
  std::vector<FiniteMeasure> irreducible_measures;
  std::vector<Path> circuits;                           // supporting circuit per irreducible
  std::vector<std::vector<double>> rotation_vectors;    // homology coords per irreducible
};

/// Minimizing measures at cohomology c.  Candidates are the circuits inside
/// the positive-speed part of the Aubry set, parametrized by Q, plus one
/// zero-speed atom per Aubry pair at the floor; each is kept only if its
/// action matches -alpha.  The Mather set is the speed graph over the Aubry
/// set, and the full set of minimizers is the convex hull of the reported
/// irreducibles.
inline MatherSolution mather_measures(const Graph& g, const GraphHamiltonian& h,
                                      const std::vector<double>& c, const HomologyBasis& basis,
                                      const MatherOptions& opts = {}) {
  OmegaHamiltonian hw = modify(h, representative_cochain(g, c, basis));
  MatherSolution sol;
  sol.c = c;
  sol.weak_kam = solve_weak_kam(g, hw, opts.wk);
  sol.alpha = sol.weak_kam.critical_value;
  for (EdgeId e : sol.weak_kam.aubry_edges)
    sol.mather_set.emplace_back(e, sol.weak_kam.speeds.at(e));

  double tol = opts.action_tol * (1.0 + std::abs(sol.alpha));

  std::vector<EdgeId> positive;
  for (const auto& [e, q] : sol.weak_kam.speeds)
    if (q > 0.0) positive.push_back(e);

  for (const Path& circuit :
       enumerate_circuits(g, positive, CircuitEnumOptions{false, opts.circuit_cap})) {
    double total_time = 0.0;
    for (EdgeId e : circuit.edges) total_time += 1.0 / sol.weak_kam.speeds.at(e);
    std::vector<MeasureAtom> atoms;
    for (EdgeId e : circuit.edges) {
      double q = sol.weak_kam.speeds.at(e);
      atoms.push_back(MeasureAtom{e, q, (1.0 / q) / total_time});
    }
    FiniteMeasure mu = FiniteMeasure::from_atoms(std::move(atoms));
    if (std::abs(action(hw, mu) + sol.alpha) > tol) continue;
    sol.rotation_vectors.push_back(homology_class(g, rotation_vector(mu), basis));
    sol.irreducible_measures.push_back(std::move(mu));
    sol.circuits.push_back(circuit);
  }

  for (int pair = 0; pair < g.pair_count(); ++pair) {
    EdgeId fwd = Graph::forward_edge(pair);
    bool aubry_zero = false;
    for (EdgeId e : {fwd, Graph::reverse(fwd)}) {
      auto it = sol.weak_kam.speeds.find(e);
      aubry_zero |= it != sol.weak_kam.speeds.end() && it->second == 0.0;
    }
    if (!aubry_zero) continue;
    FiniteMeasure mu = dirac(fwd, 0.0);
    if (std::abs(action(hw, mu) + sol.alpha) > tol) continue;
    sol.rotation_vectors.push_back(std::vector<double>(static_cast<size_t>(basis.betti()), 0.0));
    sol.irreducible_measures.push_back(std::move(mu));
    sol.circuits.push_back(Path{{fwd, Graph::reverse(fwd)}});
  }
  return sol;
}

/// Speed-graph check over a family of measures: an edge may carry only one
/// speed, and an edge pair may host both directions only at speed zero.
inline bool check_graph_property(const std::vector<FiniteMeasure>& measures, double tol = 1e-9) {
  struct PairInfo {
    std::vector<double> fwd, rev;
    bool zero = false;
  };
  std::map<int, PairInfo> pairs;
  for (const auto& mu : measures) {
    for (const auto& a : mu.atoms()) {
      PairInfo& info = pairs[Graph::pair_of(a.edge)];
      if (a.speed == 0.0)
        info.zero = true;
      else
        (Graph::is_forward(a.edge) ? info.fwd : info.rev).push_back(a.speed);
    }
  }
  for (auto& [pair, info] : pairs) {
    for (auto* side : {&info.fwd, &info.rev}) {
      std::sort(side->begin(), side->end());
      for (size_t i = 0; i + 1 < side->size(); ++i)
        if ((*side)[i + 1] - (*side)[i] > tol * (1.0 + (*side)[i])) return false;
    }
    if (!info.fwd.empty() && !info.rev.empty()) return false;
    if (info.zero && (!info.fwd.empty() || !info.rev.empty())) return false;
  }
  return true;
}

inline bool check_graph_property(const MatherSolution& sol, double tol = 1e-9) {
  return check_graph_property(sol.irreducible_measures, tol);
}

/// Extreme points of the subdifferential of alpha at c: the rotation vectors
/// of the irreducible minimizers.  The full subdifferential is their convex
/// hull; no certificate is attempted that the hull is not larger.
inline std::vector<std::vector<double>> alpha_subdifferential(const MatherSolution& sol) {
  return sol.rotation_vectors;
}

/// c minimizes alpha exactly when Q vanishes somewhere on its Aubry set.
inline bool is_alpha_minimizer(const Graph& g, const GraphHamiltonian& h,
                               const std::vector<double>& c, const HomologyBasis& basis,
                               const MatherOptions& opts = {}) {
  WeakKamResult wk =
      solve_weak_kam(g, modify(h, representative_cochain(g, c, basis)), opts.wk);
  double qmin = std::numeric_limits<double>::infinity();
  for (const auto& [e, q] : wk.speeds) qmin = std::min(qmin, q);
  return qmin <= opts.q_min_tol;
}

struct BetaResult {
  double value = 0.0;
  std::vector<double> optimal_c;
  double duality_gap = 0.0;
  int iterations = 0;
  std::vector<FiniteMeasure> certificate;               // irreducibles with positive weight
  std::vector<double> certificate_weights;
  std::vector<std::vector<double>> certificate_rotations;
};

namespace detail_mather {

inline double dot(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm_inf(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

/// Convex weights over the rotation vectors reproducing h; the phase-1
/// residual measures how far h sits outside the hull.
inline detail::LpResult hull_weights(const std::vector<std::vector<double>>& rotations,
                                     const std::vector<double>& h) {
  const size_t k = rotations.size();
  const size_t b = h.size();
  std::vector<std::vector<double>> rows(b + 1, std::vector<double>(k, 0.0));
  std::vector<double> rhs(b + 1, 0.0);
  for (size_t al = 0; al < b; ++al) {
    for (size_t i = 0; i < k; ++i) rows[al][i] = rotations[i][al];
    rhs[al] = h[al];
  }
  for (size_t i = 0; i < k; ++i) rows[b][i] = 1.0;
  rhs[b] = 1.0;
  return detail::SimplexLP::solve(rows, rhs, std::vector<double>(k, 0.0));
}

inline bool solve_linear(std::vector<std::vector<double>> m, std::vector<double>& rhs) {
  const size_t n = m.size();
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    for (size_t r = col + 1; r < n; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (std::abs(m[piv][col]) < 1e-13) return false;
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = m[r][col] / m[col][col];
      if (f == 0.0) continue;
      for (size_t j = col; j < n; ++j) m[r][j] -= f * m[col][j];
      rhs[r] -= f * rhs[col];
    }
  }
  for (size_t i = 0; i < n; ++i) rhs[i] /= m[i][i];
  return true;
}

struct CircuitData {
  Path circuit;
  std::vector<double> z;   // homology coords of [xi]
  double floor = 0.0;      // max edge floor
  // sigma(xi, a) over the unmodified Hamiltonian and its a-derivative
  double sigma(const GraphHamiltonian& h, double a) const {
    double s = 0.0;
    for (EdgeId e : circuit.edges) s += h.edge(e).sigma(a);
    return s;
  }
  double dsigma(const GraphHamiltonian& h, double a) const {
    double s = 0.0;
    for (EdgeId e : circuit.edges) s += h.edge(e).dsigma_da(a);
    return s;
  }
};

/// Closes the stationarity system for an active circuit family: common level
/// a, multipliers x on the simplex, and coordinates c making every active
/// circuit tight while the combined rotation vector equals h.  Newton on
///   sigma_j(a) - <c, z_j> = 0            (tightness)
///   sum_j x_j z_j / T_j(a) - h = 0       (rotation match, T_j = dsigma_j)
/// with x_{m-1} eliminated.  Returns false when the system is singular or
/// the solution leaves the simplex.
inline bool newton_polish(const GraphHamiltonian& h,
                          const std::vector<CircuitData*>& active, const std::vector<double>& hvec,
                          std::vector<double>& c_inout, double& a_out,
                          std::vector<double>& x_out) {
  const size_t m = active.size();
  const size_t b = hvec.size();
  double floor = -std::numeric_limits<double>::infinity();
  for (auto* cd : active) floor = std::max(floor, cd->floor);

  if (m == 1) {
    // single circuit: h must be parallel to its class; level from the
    // traversal-time match, c by minimal-norm projection onto tightness
    const CircuitData& cd = *active[0];
    double zz = dot(cd.z, cd.z);
    if (zz < 1e-18) return false;
    double s = dot(cd.z, hvec) / zz;
    if (!(s > 0.0)) return false;
    for (size_t al = 0; al < b; ++al)
      if (std::abs(s * cd.z[al] - hvec[al]) > 1e-9 * (1.0 + norm_inf(hvec))) return false;
    double target = 1.0 / s;  // T(a) = dsigma(xi, a) must equal 1/s
    double lo = floor + 1e-13 * (1.0 + std::abs(floor));
    if (cd.dsigma(h, lo) < target) return false;  // even the floor is too fast
    double step = std::max(1.0, std::abs(floor));
    double hi = floor + step;
    int guard = 0;
    while (cd.dsigma(h, hi) > target) {
      lo = hi;
      step *= 2.0;
      hi += step;
      if (++guard > 200) return false;
    }
    while (hi - lo > 1e-13 * (1.0 + std::abs(hi)))
      (cd.dsigma(h, 0.5 * (lo + hi)) > target ? lo : hi) = 0.5 * (lo + hi);
    double a = 0.5 * (lo + hi);
    double shift = (cd.sigma(h, a) - dot(c_inout, cd.z)) / zz;
    for (size_t al = 0; al < b; ++al) c_inout[al] += shift * cd.z[al];
    a_out = a;
    x_out.assign(1, 1.0);
    return true;
  }

  std::vector<double> y(b + m, 0.0);  // (c, a, x_0..x_{m-2})
  for (size_t al = 0; al < b; ++al) y[al] = c_inout[al];
  y[b] = std::max(a_out, floor + 1e-9 * (1.0 + std::abs(floor)));
  for (size_t j = 0; j + 1 < m; ++j) y[b + 1 + j] = 1.0 / static_cast<double>(m);

  for (int iter = 0; iter < 60; ++iter) {
    double a = y[b];
    std::vector<double> x(m, 0.0);
    double tail = 1.0;
    for (size_t j = 0; j + 1 < m; ++j) {
      x[j] = y[b + 1 + j];
      tail -= x[j];
    }
    x[m - 1] = tail;

    std::vector<double> c_cur(y.begin(), y.begin() + static_cast<long>(b));
    std::vector<double> T(m), F(m + b, 0.0);
    for (size_t j = 0; j < m; ++j) {
      T[j] = active[j]->dsigma(h, a);
      F[j] = active[j]->sigma(h, a) - dot(c_cur, active[j]->z);
    }
    for (size_t al = 0; al < b; ++al) {
      double s = 0.0;
      for (size_t j = 0; j < m; ++j) s += x[j] * active[j]->z[al] / T[j];
      F[m + al] = s - hvec[al];
    }

    double fscale = norm_inf(F);
    if (fscale <= 1e-11 * (1.0 + std::abs(a) + norm_inf(hvec))) {
      for (size_t al = 0; al < b; ++al) c_inout[al] = y[al];
      a_out = a;
      for (size_t j = 0; j < m; ++j)
        if (x[j] < -1e-8 || x[j] > 1.0 + 1e-8) return false;
      x_out = x;
      return true;
    }

    // dT/da by central difference, kept above the floor
    double fd = std::min(1e-6 * (1.0 + std::abs(a)), 0.45 * (a - floor));
    if (!(fd > 0.0)) fd = 1e-12;
    std::vector<double> dT(m);
    for (size_t j = 0; j < m; ++j)
      dT[j] = (active[j]->dsigma(h, a + fd) - active[j]->dsigma(h, std::max(a - fd, floor))) /
              (a + fd - std::max(a - fd, floor));

    std::vector<std::vector<double>> jac(m + b, std::vector<double>(b + m, 0.0));
    for (size_t j = 0; j < m; ++j) {
      for (size_t al = 0; al < b; ++al) jac[j][al] = -active[j]->z[al];
      jac[j][b] = T[j];
    }
    for (size_t al = 0; al < b; ++al) {
      for (size_t j = 0; j < m; ++j)
        jac[m + al][b] -= x[j] * active[j]->z[al] * dT[j] / (T[j] * T[j]);
      for (size_t j = 0; j + 1 < m; ++j)
        jac[m + al][b + 1 + j] =
            active[j]->z[al] / T[j] - active[m - 1]->z[al] / T[m - 1];
    }

    std::vector<double> step(F);
    if (!solve_linear(jac, step)) return false;
    double limit = 1.0;
    if (step[b] > 0.0 && y[b] - limit * step[b] <= floor)
      limit = 0.9 * (y[b] - floor) / step[b];
    for (size_t i = 0; i < y.size(); ++i) y[i] -= limit * step[i];
    if (y[b] <= floor) y[b] = floor + 1e-12 * (1.0 + std::abs(floor));
  }
  return false;
}

}  // namespace detail_mather

/// Mather's beta function by Fenchel duality: supergradient ascent of
/// c -> <c, h> - alpha(c), stepping along h - rho(mu_c), with a Newton polish
/// on the near-critical circuit family once the neighborhood of the optimum
/// is found.  Terminates when a convex combination of irreducibles at the
/// current c reproduces h and closes the duality gap.
inline BetaResult beta(const Graph& g, const GraphHamiltonian& h, const std::vector<double>& hvec,
                       const HomologyBasis& basis, const MatherOptions& opts = {}) {
  const size_t b = static_cast<size_t>(basis.betti());
  if (hvec.size() != b) fail(errc::bad_input, "homology coordinate count mismatch");

  // per-circuit data reused by the polish steps
  std::vector<detail_mather::CircuitData> circuits;
  for (const Path& circuit : enumerate_circuits(g, CircuitEnumOptions{false, opts.circuit_cap})) {
    detail_mather::CircuitData cd;
    cd.circuit = circuit;
    cd.z = homology_class(g, circuit, basis);
    cd.floor = -std::numeric_limits<double>::infinity();
    for (EdgeId e : circuit.edges) cd.floor = std::max(cd.floor, h.a_floor(e));
    circuits.push_back(std::move(cd));
  }

  std::vector<double> c(b, 0.0);
  std::vector<double> best_c = c;
  double best_dual = -std::numeric_limits<double>::infinity();
  bool ever_feasible = false;
  double step0 = 1.0 + detail_mather::norm_inf(hvec);

  auto try_polish = [&](std::vector<double>& c_io) -> bool {
    if (b == 0 || circuits.empty()) return false;
    OmegaHamiltonian hw = modify(h, representative_cochain(g, c_io, basis));
    std::vector<std::pair<double, size_t>> levels;
    for (size_t i = 0; i < circuits.size(); ++i)
      levels.emplace_back(circuit_level(hw, circuits[i].circuit, opts.root_tol), i);
    std::sort(levels.rbegin(), levels.rend());
    size_t pool = std::min<size_t>(levels.size(), b + 3);
    // try active families, largest levels first, sizes up to b + 1
    std::vector<size_t> idx(pool);
    for (size_t i = 0; i < pool; ++i) idx[i] = levels[i].second;
    for (size_t m = std::min(pool, b + 1); m >= 1; --m) {
      std::vector<bool> mask(pool, false);
      std::fill(mask.begin(), mask.begin() + static_cast<long>(m), true);
      std::sort(mask.rbegin(), mask.rend());
      do {
        std::vector<detail_mather::CircuitData*> active;
        for (size_t i = 0; i < pool; ++i)
          if (mask[i]) active.push_back(&circuits[idx[i]]);
        std::vector<double> c_try = c_io, x;
        double a_try = levels.front().first;
        if (!detail_mather::newton_polish(h, active, hvec, c_try, a_try, x)) continue;
        // the polished family must still dominate: global level == a_try
        double crit = critical_value(g, modify(h, representative_cochain(g, c_try, basis)), opts.wk);
        if (std::abs(crit - a_try) > 1e-7 * (1.0 + std::abs(crit))) continue;
        c_io = c_try;
        return true;
      } while (std::prev_permutation(mask.begin(), mask.end()));
    }
    return false;
  };

  BetaResult result;
  for (int iter = 1; iter <= opts.beta_max_iters; ++iter) {
    MatherSolution sol = mather_measures(g, h, c, basis, opts);
    double dual = detail_mather::dot(c, hvec) - sol.alpha;
    if (dual > best_dual) {
      best_dual = dual;
      best_c = c;
    }
    result.iterations = iter;

    if (!sol.irreducible_measures.empty()) {
      auto lp = detail_mather::hull_weights(sol.rotation_vectors, hvec);
      std::vector<double> hull(b, 0.0);
      for (size_t i = 0; i < lp.x.size(); ++i)
        for (size_t al = 0; al < b; ++al) hull[al] += lp.x[i] * sol.rotation_vectors[i][al];

      double hscale = 1.0 + detail_mather::norm_inf(hvec);
      if (lp.feasible || lp.residual <= 1e-8 * hscale) {
        ever_feasible = true;
        double primal = 0.0;
        for (size_t i = 0; i < lp.x.size(); ++i)
          if (lp.x[i] > 0.0) primal += lp.x[i] * action(h, sol.irreducible_measures[i]);
        double gap = primal - dual;
        if (std::abs(gap) <= opts.gap_tol) {
          result.value = primal;
          result.optimal_c = c;
          result.duality_gap = gap;
          for (size_t i = 0; i < lp.x.size(); ++i) {
            if (lp.x[i] <= 1e-12) continue;
            result.certificate.push_back(sol.irreducible_measures[i]);
            result.certificate_weights.push_back(lp.x[i]);
            result.certificate_rotations.push_back(sol.rotation_vectors[i]);
          }
          return result;
        }
      }

      if (b == 0) break;  // nothing to ascend over
      std::vector<double> dir(b);
      for (size_t al = 0; al < b; ++al) dir[al] = hvec[al] - hull[al];
      double t = step0 / std::sqrt(static_cast<double>(iter));
      for (size_t al = 0; al < b; ++al) c[al] += t * dir[al];
    } else if (b > 0) {
      // no verified minimizer (numerical corner): nudge along h
      double t = step0 / std::sqrt(static_cast<double>(iter));
      for (size_t al = 0; al < b; ++al) c[al] += t * hvec[al];
    } else {
      break;
    }

    if (iter == 1 || iter % 12 == 0) {
      std::vector<double> polished = best_c;
      if (try_polish(polished)) c = polished;
    }
  }

  if (ever_feasible)
    fail(errc::non_convergence,
         "beta ascent exhausted " + std::to_string(opts.beta_max_iters) +
             " iterations; best dual bound " + std::to_string(best_dual));
  fail(errc::infeasible_primal,
       "no primal certificate found; best dual bound " + std::to_string(best_dual));
}

}  // namespace graphkam
