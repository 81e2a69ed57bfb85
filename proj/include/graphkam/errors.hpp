#pragma once

#include <stdexcept>
#include <string>

namespace graphkam {

/// Failure categories surfaced by the library.  CLI maps validation-type
/// codes to exit 2 and convergence-type codes to exit 3.
enum class errc {
  // graph construction / topology
  loop_edge,
  disconnected,
  duplicate_name,
  unknown_vertex,
  not_a_cycle,
  circuit_cap_exceeded,
  // hamiltonian evaluation
  below_floor,
  non_convergence,
  // parametrized paths
  bad_concatenation,
  zero_speed_open_path,
  consecutive_equilibria,
  skeleton_break,
  bad_time,
  // measures
  not_closed,
  multi_atom_edge,
  // weak KAM / mather
  no_subsolution,
  infeasible_primal,
  // network compilation
  quadrature_failure,
  // schema / misc input
  bad_input,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::loop_edge: return "LoopEdge";
    case errc::disconnected: return "Disconnected";
    case errc::duplicate_name: return "DuplicateName";
    case errc::unknown_vertex: return "UnknownVertex";
    case errc::not_a_cycle: return "NotACycle";
    case errc::circuit_cap_exceeded: return "CircuitCapExceeded";
    case errc::below_floor: return "BelowFloor";
    case errc::non_convergence: return "NonConvergence";
    case errc::bad_concatenation: return "BadConcatenation";
    case errc::zero_speed_open_path: return "ZeroSpeedOpenPath";
    case errc::consecutive_equilibria: return "ConsecutiveEquilibria";
    case errc::skeleton_break: return "SkeletonBreak";
    case errc::bad_time: return "BadTime";
    case errc::not_closed: return "NotClosed";
    case errc::multi_atom_edge: return "MultiAtomEdge";
    case errc::no_subsolution: return "NoSubsolution";
    case errc::infeasible_primal: return "InfeasiblePrimal";
    case errc::quadrature_failure: return "QuadratureFailure";
    case errc::bad_input: return "BadInput";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace graphkam
