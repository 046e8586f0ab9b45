#include "erkn/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "erkn/phi.hpp"

namespace erkn {

void SolveSettings::validate() const {
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("settings: h must be > 0");
  if (!std::isfinite(t_end)) throw std::invalid_argument("settings: t_end must be finite");
  if (!(stage_tol > 0.0 && stage_tol < 1e-8))
    throw std::invalid_argument("settings: stage_tol must lie in (0, 1e-8)");
  if (max_iters < 1) throw std::invalid_argument("settings: max_iters must be >= 1");
  if (record_stride < 1) throw std::invalid_argument("settings: record_stride must be >= 1");
}

Stepper::Stepper(const MethodTableau& method, const Problem& problem, double h, double stage_tol,
                 int max_iters)
    : Stepper(method, problem, spectral_decompose(problem.m), h, stage_tol, max_iters) {}

Stepper::Stepper(const MethodTableau& method, const Problem& problem, const SpectralCache& cache,
                 double h, double stage_tol, int max_iters)
    : method_(method),
      problem_(problem),
      cache_(cache),
      h_(h),
      tol_(stage_tol),
      max_iters_(max_iters),
      s_(method.stages),
      n_(problem.dim) {
  if (!(h > 0.0)) throw std::invalid_argument("Stepper: h must be > 0");
  if (cache.dim != problem.dim) throw std::invalid_argument("Stepper: cache dimension mismatch");
  init();
}

void Stepper::init() {
  const auto s = static_cast<std::size_t>(s_);
  const double h2 = h_ * h_;
  q_from_q_.resize(n_);
  q_from_p_.resize(n_);
  p_from_q_.resize(n_);
  p_from_p_.resize(n_);
  stage_q_.assign(s, Vector(n_));
  stage_p_.assign(s, Vector(n_));
  b_.assign(s, Vector(n_));
  b_bar_.assign(s, Vector(n_));
  implicit_den_.assign(s, Vector(n_, 1.0));
  a_bar_.assign(s, {});
  for (std::size_t i = 0; i < s; ++i) a_bar_[i].assign(i + 1, Vector(n_));

  for (std::size_t k = 0; k < n_; ++k) {
    const double lambda = cache_.eigenvalues[k];
    const double v = method_.classical ? 0.0 : h2 * lambda;
    const double phi1 = phi(1, v);
    q_from_q_[k] = phi(0, v);
    q_from_p_[k] = h_ * phi1;
    p_from_q_[k] = method_.classical ? 0.0 : -h_ * lambda * phi1;
    p_from_p_[k] = phi(0, v);
    for (std::size_t i = 0; i < s; ++i) {
      const double c = method_.c[i];
      stage_q_[i][k] = phi(0, c * c * v);
      stage_p_[i][k] = h_ * c * phi(1, c * c * v);
      b_[i][k] = h_ * method_.b[i](v);
      b_bar_[i][k] = h2 * method_.b_bar[i](v);
      for (std::size_t j = 0; j <= i; ++j) a_bar_[i][j][k] = h2 * method_.a_bar[i][j](v);
      if (method_.classical) {
        implicit_den_[i][k] = 1.0 + a_bar_[i][i][k] * lambda;
        if (std::abs(implicit_den_[i][k]) < kGuardThreshold)
          throw GuardError("classical stage: 1 + h^2 a_bar_ii lambda vanishes");
      }
    }
  }
}

int Stepper::solve_stage(int i, std::span<const double> predictor, std::span<double> stage,
                         std::span<double> force) const {
  const auto si = static_cast<std::size_t>(i);
  const Vector& a_ii = a_bar_[si][si];
  const Vector& den = implicit_den_[si];
  std::copy(predictor.begin(), predictor.end(), stage.begin());
  Vector phys(n_), grad(n_), next_phys(n_);
  cache_.from_modal(stage, phys);
  for (int it = 1; it <= max_iters_; ++it) {
    problem_.grad_u(phys, grad);
    cache_.to_modal(grad, force);
    // Only the nonlinear part is iterated; a classical linear term is solved exactly.
    for (std::size_t k = 0; k < n_; ++k) stage[k] = (predictor[k] - a_ii[k] * force[k]) / den[k];
    cache_.from_modal(stage, next_phys);
    double diff = 0.0, norm = 0.0;
    for (std::size_t k = 0; k < n_; ++k) {
      if (!std::isfinite(next_phys[k]))
        throw ConvergenceError("stage " + std::to_string(i + 1) + ": non-finite iterate");
      diff = std::max(diff, std::abs(next_phys[k] - phys[k]));
      norm = std::max(norm, std::abs(phys[k]));
    }
    if (diff <= tol_ * (1.0 + norm)) {
      if (method_.classical)
        for (std::size_t k = 0; k < n_; ++k) force[k] += cache_.eigenvalues[k] * stage[k];
      return it;
    }
    phys.swap(next_phys);
  }
  throw ConvergenceError("stage " + std::to_string(i + 1) + ": no convergence in " +
                         std::to_string(max_iters_) + " iterations");
}

StepStats Stepper::step(State& st) const {
  if (st.q.size() != n_ || st.p.size() != n_)
    throw std::invalid_argument("step: state dimension mismatch");
  Vector q(n_), p(n_);
  cache_.to_modal(st.q, q);
  cache_.to_modal(st.p, p);

  const auto s = static_cast<std::size_t>(s_);
  std::vector<Vector> force(s, Vector(n_));
  Vector predictor(n_), stage(n_);
  StepStats stats;
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t k = 0; k < n_; ++k) {
      double acc = stage_q_[i][k] * q[k] + stage_p_[i][k] * p[k];
      for (std::size_t j = 0; j < i; ++j) acc -= a_bar_[i][j][k] * force[j][k];
      predictor[k] = acc;
    }
    const int iters = solve_stage(static_cast<int>(i), predictor, stage, force[i]);
    stats.nfev += iters;
    stats.max_stage_iters = std::max(stats.max_stage_iters, iters);
  }

  Vector qn(n_), pn(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    double qa = q_from_q_[k] * q[k] + q_from_p_[k] * p[k];
    double pa = p_from_q_[k] * q[k] + p_from_p_[k] * p[k];
    for (std::size_t i = 0; i < s; ++i) {
      qa -= b_bar_[i][k] * force[i][k];
      pa -= b_[i][k] * force[i][k];
    }
    qn[k] = qa;
    pn[k] = pa;
  }
  cache_.from_modal(qn, st.q);
  cache_.from_modal(pn, st.p);
  st.t += h_;
  return stats;
}

State step(const MethodTableau& method, const Problem& problem, const State& s,
           const SolveSettings& settings) {
  settings.validate();
  const Stepper stepper(method, problem, settings.h, settings.stage_tol, settings.max_iters);
  State out = s;
  stepper.step(out);
  return out;
}

std::int64_t step_count(double t0, double t_end, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("step_count: h must be > 0");
  const double n = std::round((t_end - t0) / h);
  if (n < 0.0) throw std::invalid_argument("step_count: t_end before t0");
  return static_cast<std::int64_t>(n);
}

Trajectory integrate(const MethodTableau& method, const Problem& problem, const State& initial,
                     const SolveSettings& settings) {
  settings.validate();
  Trajectory tr;
  const double h0 = problem.hamiltonian(initial);
  tr.states.push_back(initial);
  tr.energy.push_back(h0);
  const std::int64_t n = step_count(initial.t, settings.t_end, settings.h);
  if (n == 0) return tr;

  try {
    const Stepper stepper(method, problem, settings.h, settings.stage_tol, settings.max_iters);
    State cur = initial;
    tr.step_iters.reserve(static_cast<std::size_t>(n));
    for (std::int64_t k = 1; k <= n; ++k) {
      const StepStats st = stepper.step(cur);
      cur.t = initial.t + static_cast<double>(k) * settings.h;
      tr.steps = k;
      tr.nfev += st.nfev;
      tr.max_stage_iters = std::max(tr.max_stage_iters, st.max_stage_iters);
      tr.step_iters.push_back(st.max_stage_iters);
      const double hk = problem.hamiltonian(cur);
      if (!std::isfinite(hk)) throw ConvergenceError("non-finite Hamiltonian");
      tr.geh = std::max(tr.geh, std::abs(hk - h0));
      if (k % settings.record_stride == 0 || k == n) {
        tr.states.push_back(cur);
        tr.energy.push_back(hk);
      }
    }
  } catch (const GuardError& e) {
    tr.guard_tripped = true;
    tr.error = e.what();
  } catch (const std::exception& e) {
    tr.error = e.what();
  }
  return tr;
}

}  // namespace erkn
