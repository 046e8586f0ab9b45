#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "erkn/matrix.hpp"
#include "erkn/problems.hpp"
#include "erkn/spectral.hpp"
#include "erkn/tableau.hpp"

namespace erkn {

/// Stage fixed-point iteration failed to converge or produced non-finite values.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SolveSettings {
  double h = 0.01;
  double t_end = 1.0;
  double stage_tol = 1e-14;
  int max_iters = 50;
  int record_stride = 1;

  /// Throws std::invalid_argument unless h > 0, stage_tol in (0, 1e-8),
  /// max_iters >= 1, record_stride >= 1.
  void validate() const;
};

struct StepStats {
  std::int64_t nfev = 0;  // grad U evaluations, one per fixed-point iteration
  int max_stage_iters = 0;
};

struct Trajectory {
  std::vector<State> states;    // every record_stride steps, plus the final state
  std::vector<double> energy;   // H at each recorded state
  std::vector<int> step_iters;  // largest stage iteration count of each step
  std::int64_t steps = 0;
  std::int64_t nfev = 0;
  double geh = 0.0;  // max |H_n - H_0| over every step
  int max_stage_iters = 0;
  bool guard_tripped = false;
  std::string error;  // empty unless the run was truncated
  bool ok() const { return error.empty(); }
};

/// Diagonal implicit ERKN stepper for a fixed (method, problem, h). All
/// matrix functions of V = h^2 M are evaluated once per eigenvalue; each step
/// works in the eigenbasis of M.
///
/// A classical tableau is applied as an RKN method to q'' = -(M q + grad U(q));
/// its linear stage term is solved exactly mode by mode.
class Stepper {
 public:
  Stepper(const MethodTableau& method, const Problem& problem, double h,
          double stage_tol = 1e-14, int max_iters = 50);
  Stepper(const MethodTableau& method, const Problem& problem, const SpectralCache& cache,
          double h, double stage_tol = 1e-14, int max_iters = 50);

  /// Solves Q = predictor - h^2 a_bar_ii(V) G(Q) for stage i by fixed-point
  /// iteration from Q = predictor. Inputs and outputs are modal; `force` gets
  /// the modal force G(Q) of the last iterate. Returns the iteration count.
  int solve_stage(int i, std::span<const double> predictor, std::span<double> stage,
                  std::span<double> force) const;

  /// Advances s by one step of size h in place.
  StepStats step(State& s) const;

  double h() const { return h_; }
  const SpectralCache& cache() const { return cache_; }
  const MethodTableau& method() const { return method_; }

 private:
  void init();

  MethodTableau method_;
  Problem problem_;
  SpectralCache cache_;
  double h_;
  double tol_;
  int max_iters_;
  int s_;
  std::size_t n_;
  // Per-mode coefficients, indexed [mode] or [stage][mode].
  Vector q_from_q_, q_from_p_, p_from_q_, p_from_p_;
  std::vector<Vector> stage_q_, stage_p_, b_, b_bar_;
  std::vector<std::vector<Vector>> a_bar_;
  std::vector<Vector> implicit_den_;
};

/// One step from s with settings.h.
State step(const MethodTableau& method, const Problem& problem, const State& s,
           const SolveSettings& settings);

/// Integrates from `initial` to settings.t_end with round((t_end - t0) / h)
/// steps. Errors truncate the trajectory and are stored in Trajectory::error.
Trajectory integrate(const MethodTableau& method, const Problem& problem, const State& initial,
                     const SolveSettings& settings);

std::int64_t step_count(double t0, double t_end, double h);

}  // namespace erkn
