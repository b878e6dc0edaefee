#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bomp/pursuit.hpp"
#include "bomp/rip.hpp"

namespace bomp {

enum class CoeffModel { Gaussian, Rademacher, UnitBlock };
enum class MatrixModel { GaussianNormalized, OrthonormalPerturbed };

const char* to_string(CoeffModel m);
const char* to_string(MatrixModel m);
CoeffModel coeff_model_from_string(const std::string& s);
MatrixModel matrix_model_from_string(const std::string& s);

/// Seeded description of one random problem family. Every generated object
/// is a pure function of (spec, trial index).
struct EnsembleSpec {
  int rows = 0;  // measurement count L
  BlockLayout layout;
  int sparsity = 0;  // nonzero block count K
  CoeffModel coeff_model = CoeffModel::Gaussian;
  MatrixModel matrix_model = MatrixModel::GaussianNormalized;
  bool normalize_columns = false;  // gaussian_normalized only
  double epsilon = 0.0;            // orthonormal_perturbed noise scale
  int trials = 0;
  std::uint64_t seed = 0;

  /// Throws InvalidSpec on out-of-range fields.
  void validate() const;

  bool operator==(const EnsembleSpec&) const = default;
};

/// Measurement matrix for one trial. gaussian_normalized: i.i.d. normal
/// entries scaled by 1/sqrt(L), optionally column-normalized.
/// orthonormal_perturbed: N orthonormal columns (requires N <= L; beyond that,
/// truncated unions of orthonormal bases) plus epsilon-scaled normal noise;
/// the base and the noise do not depend on epsilon, so the family is
/// continuous in it.
Matrix gen_matrix(const EnsembleSpec& spec, std::uint64_t index);

/// Block-sparse signal with exactly K nonzero blocks, chosen uniformly;
/// coefficients follow the ensemble's coeff_model, each chosen block rejected
/// and redrawn below norm 1e-6.
BlockSignal gen_block_sparse_signal(const EnsembleSpec& spec, std::uint64_t index);

struct TrialResult {
  bool exact = false;  // relative error <= 1e-8 and block supports equal
  int iterations = 0;
  double residual_final = 0.0;
  bool support_recovered = false;
};

struct TrialPair {
  TrialResult block;   // block pursuit at the signal's layout
  TrialResult scalar;  // conventional pursuit (d = 1)
};

/// Forms y = Dx, runs both algorithms, and scores each estimate against the
/// ground truth. Pursuit failures (rank limits) score as failures.
TrialPair run_trial(const Matrix& d, const BlockSignal& x, const PursuitConfig& block_config,
                    const PursuitConfig& scalar_config);

struct Theorem1Report {
  RipCertificate certificate;
  std::uint64_t supports_visited = 0;  // exactly C(M, K)
  int draws_per_support = 0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  int max_iterations_observed = 0;
  bool asserted = false;  // certificate met the threshold, so failures are errors
  bool all_exact = false;
};

/// Certifies D at order K+1, then sweeps every K-subset of blocks with
/// seeded coefficient draws and runs the block pursuit on each y = Dx.
/// When the certificate meets the threshold the sweep is an assertion
/// (all_exact must hold); otherwise the empirical rate is reported as-is.
Theorem1Report verify_theorem1_exhaustive(const Matrix& d, const BlockLayout& layout,
                                          int sparsity, int draws_per_support,
                                          std::uint64_t seed, CoeffModel coeff_model,
                                          std::uint64_t budget = 2'000'000);

struct SweepCellAlg {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double success_rate = 0.0;
  double mean_iterations = 0.0;  // over successful trials; 0 when none
};

struct SweepCell {
  int rows = 0;  // L
  int sparsity = 0;
  SweepCellAlg block;
  SweepCellAlg scalar;
};

struct SweepSpec {
  EnsembleSpec base;       // rows and sparsity fields are overridden per cell
  std::vector<int> rows_values;
  std::vector<int> sparsity_values;
  int threads = 1;
};

struct SweepGrid {
  SweepSpec spec;
  std::vector<SweepCell> cells;  // ordered by (rows, sparsity)
};

/// Runs `trials` seeded trials of both algorithms in every (L, K) cell.
/// Trial t of a cell uses matrix index t and signal index t; stopping indices
/// default to K blocks / K*d scalars. Output is a pure function of the
/// arguments, independent of thread count.
SweepGrid phase_sweep(const SweepSpec& spec);

}  // namespace bomp
