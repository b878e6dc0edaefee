#pragma once

#include <vector>

#include "bomp/block.hpp"

namespace bomp {

struct PursuitConfig {
  /// Stopping iteration index; the run performs at most this many steps.
  /// 0 leaves only the implicit caps (residual convergence, rank limit).
  int max_iterations = 0;
  /// Early exit once ||r||_2 <= residual_tol * ||y||_2.
  double residual_tol = 1e-10;
  /// Block-support decision threshold; 0 means the scale-aware default.
  double zero_tol = 0.0;
};

/// One snapshot of the greedy pursuit: after `iteration` selections the
/// residual equals y - D * estimate and the estimate is the least-squares
/// fit on the selected blocks.
struct PursuitState {
  int iteration = 0;
  BlockSupport support;
  BlockSignal estimate;
  Vector residual;
  Vector proxy;  // correlation vector D'r used for the latest selection

  static PursuitState initial(const BlockLayout& layout, const Vector& y);
};

enum class Termination { ResidualConverged, MaxIterations, RankLimit };

const char* to_string(Termination t);

struct PursuitStep {
  int chosen_block = 0;
  double residual_norm = 0.0;
  std::vector<double> proxy_block_norms;  // all M block norms at selection time
};

struct PursuitTrace {
  std::vector<PursuitStep> steps;
  PursuitState final_state;
  Termination termination = Termination::ResidualConverged;

  int iterations() const { return static_cast<int>(steps.size()); }
  std::vector<int> selections() const;
};

/// Index (1-based) of the block of h with the largest norm outside the
/// forbidden set; exact ties go to the smallest index.
/// Throws AllForbidden when no candidate remains.
int select_block(const BlockSignal& h, const BlockSupport& forbidden);

/// One greedy iteration: correlate (h = D'r), select a new block, refit by
/// least squares on the grown support, update the residual. The new residual
/// is orthogonal to every selected column.
///
/// Throws ResidualAlreadyConverged if the state's residual is already at
/// tolerance, RankDeficient if the grown support cannot keep full column
/// rank, AllForbidden if every block was selected.
PursuitState pursuit_step(const Matrix& d, const Vector& y, const PursuitState& state,
                          const PursuitConfig& config);

/// Greedy block pursuit: repeat pursuit_step until the residual converges,
/// max_iterations is reached, or the next subproblem would be rank limited.
/// Deterministic for identical inputs.
PursuitTrace block_omp(const Matrix& d, const Vector& y, const BlockLayout& layout,
                       const PursuitConfig& config);

/// Conventional matching pursuit: block_omp with unit blocks (d=1, M=N).
PursuitTrace omp(const Matrix& d, const Vector& y, const PursuitConfig& config);

}  // namespace bomp
