#pragma once

#include <string>
#include <vector>

namespace nematic {

/// Which time variable a run is measured in: the kinetic clock t, the
/// rescaled clock eps^2 t, or the vortex clock t'.
enum class Clock { kinetic, rescaled, vortex };

inline const char* clock_name(Clock c) {
  switch (c) {
    case Clock::kinetic: return "t";
    case Clock::rescaled: return "t_rescaled";
    case Clock::vortex: return "t_prime";
  }
  return "t";
}

/// Time series of states plus per-record diagnostics.
template <class State, class Diag>
struct Trajectory {
  Clock clock = Clock::kinetic;
  std::vector<double> times;
  std::vector<State> states;
  std::vector<Diag> diagnostics;
  std::string status = "ok";

  void push(double t, State s, Diag d) {
    times.push_back(t);
    states.push_back(std::move(s));
    diagnostics.push_back(std::move(d));
  }
  std::size_t size() const { return times.size(); }
  const State& back() const { return states.back(); }
};

}  // namespace nematic
