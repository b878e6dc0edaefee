#include "bomp/pursuit.hpp"

#include <cmath>
#include <string>

namespace bomp {

PursuitState PursuitState::initial(const BlockLayout& layout, const Vector& y) {
  PursuitState s;
  s.iteration = 0;
  s.support = BlockSupport::empty(layout);
  s.estimate = BlockSignal::zero(layout);
  s.residual = y;
  s.proxy = Vector::Zero(layout.n);
  return s;
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::ResidualConverged:
      return "residual_converged";
    case Termination::MaxIterations:
      return "max_iterations";
    case Termination::RankLimit:
      return "rank_limit";
  }
  return "unknown";
}

std::vector<int> PursuitTrace::selections() const {
  std::vector<int> out;
  out.reserve(steps.size());
  for (const auto& s : steps) {
    out.push_back(s.chosen_block);
  }
  return out;
}

int select_block(const BlockSignal& h, const BlockSupport& forbidden) {
  if (forbidden.layout != h.layout) {
    throw LayoutMismatch("forbidden set layout differs from proxy layout");
  }
  int best = 0;
  double best_norm = -1.0;
  for (int l = 1; l <= h.layout.m; ++l) {
    if (forbidden.contains(l)) {
      continue;
    }
    const double nrm = block(h, l).norm();
    if (nrm > best_norm) {
      best_norm = nrm;
      best = l;
    }
  }
  if (best == 0) {
    throw AllForbidden("every block is forbidden");
  }
  return best;
}

static void check_problem(const Matrix& d, const Vector& y, const BlockLayout& layout) {
  if (d.cols() != layout.n) {
    throw LayoutMismatch("matrix has " + std::to_string(d.cols()) + " columns, layout expects " +
                         std::to_string(layout.n));
  }
  if (d.rows() != y.size()) {
    throw LengthMismatch("matrix has " + std::to_string(d.rows()) +
                         " rows, measurement has " + std::to_string(y.size()));
  }
  require_finite(d, "pursuit: matrix");
  require_finite(y, "pursuit: measurement");
}

PursuitState pursuit_step(const Matrix& d, const Vector& y, const PursuitState& state,
                          const PursuitConfig& config) {
  check_problem(d, y, state.support.layout);
  if (state.residual.norm() <= config.residual_tol * y.norm()) {
    throw ResidualAlreadyConverged("residual norm " + std::to_string(state.residual.norm()) +
                                   " already at tolerance");
  }
  const BlockLayout& layout = state.support.layout;
  const BlockSignal h = BlockSignal::create(layout, d.transpose() * state.residual);
  const int chosen = select_block(h, state.support);

  std::vector<int> grown = state.support.indices;
  grown.push_back(chosen);
  const BlockSupport support = BlockSupport::create(layout, std::move(grown));

  // Refit on the whole grown support; the residual leaves the span of every
  // selected column, which is what makes reselection impossible.
  const Matrix a = submatrix_for_support(d, support);
  const Vector coeffs = solve_least_squares(a, y);

  PursuitState next;
  next.iteration = state.iteration + 1;
  next.support = support;
  next.estimate = embed(coeffs, support);
  next.residual = y - a * coeffs;
  next.proxy = h.values;
  return next;
}

PursuitTrace block_omp(const Matrix& d, const Vector& y, const BlockLayout& layout,
                       const PursuitConfig& config) {
  check_problem(d, y, layout);
  const double y_norm = y.norm();
  PursuitTrace trace;
  PursuitState state = PursuitState::initial(layout, y);
  for (;;) {
    if (state.residual.norm() <= config.residual_tol * y_norm) {
      trace.termination = Termination::ResidualConverged;
      break;
    }
    if (config.max_iterations > 0 && state.iteration >= config.max_iterations) {
      trace.termination = Termination::MaxIterations;
      break;
    }
    if (state.support.size() == layout.m ||
        static_cast<Eigen::Index>(state.support.size() + 1) * layout.d > d.rows()) {
      trace.termination = Termination::RankLimit;
      break;
    }
    PursuitState next;
    try {
      next = pursuit_step(d, y, state, config);
    } catch (const RankDeficient&) {
      trace.termination = Termination::RankLimit;
      break;
    }
    PursuitStep step;
    for (int l : next.support.indices) {
      if (!state.support.contains(l)) {
        step.chosen_block = l;
      }
    }
    step.residual_norm = next.residual.norm();
    const BlockSignal proxy = BlockSignal{layout, next.proxy};
    step.proxy_block_norms.reserve(static_cast<std::size_t>(layout.m));
    for (int l = 1; l <= layout.m; ++l) {
      step.proxy_block_norms.push_back(block(proxy, l).norm());
    }
    trace.steps.push_back(std::move(step));
    state = std::move(next);
  }
  trace.final_state = std::move(state);
  return trace;
}

PursuitTrace omp(const Matrix& d, const Vector& y, const PursuitConfig& config) {
  return block_omp(d, y, BlockLayout::scalar(static_cast<int>(d.cols())), config);
}

}  // namespace bomp
