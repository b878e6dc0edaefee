#include "bomp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "bomp/combinatorics.hpp"
#include "bomp/rng.hpp"

namespace bomp {

namespace {

// Stream-id namespaces; the trial index is added so every generated object
// has its own stream and parallel execution cannot change any draw.
constexpr std::uint64_t kStreamMatrixBase = 0x100000000ull * 1;
constexpr std::uint64_t kStreamMatrixNoise = 0x100000000ull * 2;
constexpr std::uint64_t kStreamSignalBlocks = 0x100000000ull * 3;
constexpr std::uint64_t kStreamSignalCoeffs = 0x100000000ull * 4;

constexpr double kMinBlockNorm = 1e-6;
constexpr double kExactRelTol = 1e-8;

void fill_gaussian(Matrix& m, CounterRng::Stream& st, double scale) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      m(i, j) = st.gaussian() * scale;
    }
  }
}

/// Writes model-distributed coefficients into one block until it clears the
/// minimum-norm rejection threshold.
void fill_block(BlockSignal& x, int l, CoeffModel model, CounterRng::Stream& st) {
  const Eigen::Index base = static_cast<Eigen::Index>(l - 1) * x.layout.d;
  for (;;) {
    for (int i = 0; i < x.layout.d; ++i) {
      x.values(base + i) = model == CoeffModel::Rademacher ? st.rademacher() : st.gaussian();
    }
    const double nrm = x.values.segment(base, x.layout.d).norm();
    if (model == CoeffModel::UnitBlock) {
      if (nrm > 0.0) {
        x.values.segment(base, x.layout.d) /= nrm;
        return;
      }
      continue;
    }
    if (nrm >= kMinBlockNorm) {
      return;
    }
  }
}

BlockSignal signal_on(const BlockLayout& layout, const std::vector<int>& blocks,
                      CoeffModel model, CounterRng::Stream& st) {
  BlockSignal x = BlockSignal::zero(layout);
  for (int l : blocks) {
    fill_block(x, l, model, st);
  }
  return x;
}

TrialResult score(const BlockSignal& truth, const BlockLayout& layout,
                  const PursuitTrace& trace) {
  TrialResult r;
  r.iterations = trace.iterations();
  r.residual_final = trace.final_state.residual.norm();
  const BlockSignal t{layout, truth.values};
  const BlockSignal& est = trace.final_state.estimate;
  r.support_recovered = block_support(est).indices == block_support(t).indices;
  r.exact =
      r.support_recovered && (est.values - t.values).norm() <= kExactRelTol * t.values.norm();
  return r;
}

TrialResult failed_trial(const Vector& y) {
  TrialResult r;
  r.residual_final = y.norm();
  return r;
}

}  // namespace

const char* to_string(CoeffModel m) {
  switch (m) {
    case CoeffModel::Gaussian:
      return "gaussian";
    case CoeffModel::Rademacher:
      return "rademacher";
    case CoeffModel::UnitBlock:
      return "unit_block";
  }
  return "unknown";
}

const char* to_string(MatrixModel m) {
  switch (m) {
    case MatrixModel::GaussianNormalized:
      return "gaussian_normalized";
    case MatrixModel::OrthonormalPerturbed:
      return "orthonormal_perturbed";
  }
  return "unknown";
}

CoeffModel coeff_model_from_string(const std::string& s) {
  if (s == "gaussian") {
    return CoeffModel::Gaussian;
  }
  if (s == "rademacher") {
    return CoeffModel::Rademacher;
  }
  if (s == "unit_block") {
    return CoeffModel::UnitBlock;
  }
  throw ValidationError("coeff_model", "unknown value '" + s + "'");
}

MatrixModel matrix_model_from_string(const std::string& s) {
  if (s == "gaussian_normalized") {
    return MatrixModel::GaussianNormalized;
  }
  if (s == "orthonormal_perturbed") {
    return MatrixModel::OrthonormalPerturbed;
  }
  throw ValidationError("matrix_model", "unknown value '" + s + "'");
}

void EnsembleSpec::validate() const {
  if (rows < 1) {
    throw InvalidSpec("rows must be at least 1");
  }
  if (layout.n < 1 || layout.d < 1 || layout.m < 1 || layout.m * layout.d != layout.n) {
    throw InvalidSpec("layout is inconsistent");
  }
  if (sparsity < 1 || sparsity > layout.m) {
    throw InvalidSpec("sparsity must lie in 1.." + std::to_string(layout.m));
  }
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw InvalidSpec("epsilon must be finite and non-negative");
  }
  if (trials < 0) {
    throw InvalidSpec("trials must be non-negative");
  }
  if (normalize_columns && matrix_model != MatrixModel::GaussianNormalized) {
    throw InvalidSpec("normalize_columns applies to gaussian_normalized only");
  }
}

Matrix gen_matrix(const EnsembleSpec& spec, std::uint64_t index) {
  spec.validate();
  const CounterRng rng(spec.seed);
  const int rows = spec.rows;
  const int cols = spec.layout.n;

  if (spec.matrix_model == MatrixModel::GaussianNormalized) {
    auto st = rng.stream(kStreamMatrixBase + index);
    Matrix m(rows, cols);
    fill_gaussian(m, st, 1.0 / std::sqrt(static_cast<double>(rows)));
    if (spec.normalize_columns) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double nrm = m.col(j).norm();
        if (nrm <= 0.0) {
          throw ZeroColumn("generated column " + std::to_string(j + 1) + " is zero");
        }
        m.col(j) /= nrm;
      }
    }
    return m;
  }

  // orthonormal_perturbed: orthonormal column chunks from QR of fresh
  // gaussian draws; with cols > rows this degrades to a union of bases
  auto base_st = rng.stream(kStreamMatrixBase + index);
  Matrix base(rows, cols);
  int filled = 0;
  while (filled < cols) {
    const int width = std::min(rows, cols - filled);
    Matrix g(rows, width);
    fill_gaussian(g, base_st, 1.0);
    Eigen::HouseholderQR<Matrix> qr(g);
    base.middleCols(filled, width) =
        qr.householderQ() * Matrix::Identity(rows, width);
    filled += width;
  }
  if (spec.epsilon == 0.0) {
    return base;
  }
  auto noise_st = rng.stream(kStreamMatrixNoise + index);
  Matrix noise(rows, cols);
  fill_gaussian(noise, noise_st, 1.0 / std::sqrt(static_cast<double>(rows)));
  return base + spec.epsilon * noise;
}

BlockSignal gen_block_sparse_signal(const EnsembleSpec& spec, std::uint64_t index) {
  spec.validate();
  const CounterRng rng(spec.seed);
  auto block_st = rng.stream(kStreamSignalBlocks + index);
  auto coeff_st = rng.stream(kStreamSignalCoeffs + index);
  const std::vector<int> blocks = block_st.distinct_sorted(spec.layout.m, spec.sparsity);
  return signal_on(spec.layout, blocks, spec.coeff_model, coeff_st);
}

TrialPair run_trial(const Matrix& d, const BlockSignal& x, const PursuitConfig& block_config,
                    const PursuitConfig& scalar_config) {
  const Vector y = d * x.values;
  TrialPair pair;
  try {
    pair.block = score(x, x.layout, block_omp(d, y, x.layout, block_config));
  } catch (const Error&) {
    pair.block = failed_trial(y);
  }
  const BlockLayout scalar_layout = BlockLayout::scalar(x.layout.n);
  try {
    pair.scalar = score(x, scalar_layout, omp(d, y, scalar_config));
  } catch (const Error&) {
    pair.scalar = failed_trial(y);
  }
  return pair;
}

Theorem1Report verify_theorem1_exhaustive(const Matrix& d, const BlockLayout& layout,
                                          int sparsity, int draws_per_support,
                                          std::uint64_t seed, CoeffModel coeff_model,
                                          std::uint64_t budget) {
  if (d.cols() != layout.n) {
    throw LayoutMismatch("matrix has " + std::to_string(d.cols()) + " columns, layout expects " +
                         std::to_string(layout.n));
  }
  if (sparsity < 1 || sparsity + 1 > layout.m) {
    throw ValidationError("sparsity", "needs 1 <= K and K+1 <= M for the certificate");
  }
  if (draws_per_support < 1) {
    throw ValidationError("draws_per_support", "must be at least 1");
  }

  Theorem1Report rep;
  rep.certificate = block_rip_constant_exact(d, layout, sparsity + 1, budget);
  const std::uint64_t total = binomial(layout.m, sparsity);
  if (total > budget) {
    throw BudgetExceeded("sweeping " + std::to_string(total) +
                         " supports exceeds the budget of " + std::to_string(budget));
  }
  rep.supports_visited = total;
  rep.draws_per_support = draws_per_support;

  const CounterRng rng(seed);
  PursuitConfig config;
  config.max_iterations = sparsity;

  std::vector<int> combo = first_combination(sparsity);
  std::uint64_t rank = 0;
  for (;;) {
    for (int dr = 0; dr < draws_per_support; ++dr) {
      auto st = rng.stream(rank * static_cast<std::uint64_t>(draws_per_support) +
                           static_cast<std::uint64_t>(dr));
      const BlockSignal x = signal_on(layout, combo, coeff_model, st);
      const Vector y = d * x.values;
      TrialResult res;
      try {
        res = score(x, layout, block_omp(d, y, layout, config));
      } catch (const Error&) {
        res = failed_trial(y);
      }
      ++rep.trials;
      if (res.exact) {
        ++rep.successes;
      }
      rep.max_iterations_observed = std::max(rep.max_iterations_observed, res.iterations);
    }
    ++rank;
    if (!next_combination(combo, layout.m)) {
      break;
    }
  }
  rep.asserted = rep.certificate.satisfied;
  rep.all_exact = rep.successes == rep.trials;
  return rep;
}

SweepGrid phase_sweep(const SweepSpec& spec) {
  SweepGrid grid;
  grid.spec = spec;
  for (int rows : spec.rows_values) {
    for (int sparsity : spec.sparsity_values) {
      EnsembleSpec cell_spec = spec.base;
      cell_spec.rows = rows;
      cell_spec.sparsity = sparsity;
      cell_spec.validate();

      PursuitConfig block_config;
      block_config.max_iterations = sparsity;
      PursuitConfig scalar_config;
      scalar_config.max_iterations = sparsity * cell_spec.layout.d;

      struct Acc {
        std::uint64_t block_successes = 0;
        std::uint64_t block_iterations = 0;  // summed over successful trials
        std::uint64_t scalar_successes = 0;
        std::uint64_t scalar_iterations = 0;
      };

      const int trials = cell_spec.trials;
      const int parts = std::max(1, std::min(spec.threads, trials));
      std::vector<Acc> accs(static_cast<std::size_t>(parts));

      const auto worker = [&](int begin, int end, Acc& acc) {
        for (int t = begin; t < end; ++t) {
          const Matrix d = gen_matrix(cell_spec, static_cast<std::uint64_t>(t));
          const BlockSignal x =
              gen_block_sparse_signal(cell_spec, static_cast<std::uint64_t>(t));
          const TrialPair pair = run_trial(d, x, block_config, scalar_config);
          if (pair.block.exact) {
            ++acc.block_successes;
            acc.block_iterations += static_cast<std::uint64_t>(pair.block.iterations);
          }
          if (pair.scalar.exact) {
            ++acc.scalar_successes;
            acc.scalar_iterations += static_cast<std::uint64_t>(pair.scalar.iterations);
          }
        }
      };

      if (parts == 1) {
        worker(0, trials, accs[0]);
      } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(parts));
        const int chunk = trials / parts;
        const int extra = trials % parts;
        int begin = 0;
        for (int p = 0; p < parts; ++p) {
          const int end = begin + chunk + (p < extra ? 1 : 0);
          pool.emplace_back(worker, begin, end, std::ref(accs[static_cast<std::size_t>(p)]));
          begin = end;
        }
        for (auto& th : pool) {
          th.join();
        }
      }

      // integer reduction in fixed order keeps the grid identical for any
      // thread count
      Acc sum;
      for (const Acc& a : accs) {
        sum.block_successes += a.block_successes;
        sum.block_iterations += a.block_iterations;
        sum.scalar_successes += a.scalar_successes;
        sum.scalar_iterations += a.scalar_iterations;
      }

      SweepCell cell;
      cell.rows = rows;
      cell.sparsity = sparsity;
      const auto fill = [trials](SweepCellAlg& alg, std::uint64_t successes,
                                 std::uint64_t iterations) {
        alg.trials = static_cast<std::uint64_t>(trials);
        alg.successes = successes;
        alg.success_rate =
            trials > 0 ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
        alg.mean_iterations =
            successes > 0 ? static_cast<double>(iterations) / static_cast<double>(successes)
                          : 0.0;
      };
      fill(cell.block, sum.block_successes, sum.block_iterations);
      fill(cell.scalar, sum.scalar_successes, sum.scalar_iterations);
      grid.cells.push_back(cell);
    }
  }
  return grid;
}

}  // namespace bomp
