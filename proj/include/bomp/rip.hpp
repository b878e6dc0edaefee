#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bomp/block.hpp"

namespace bomp {

/// Result of an exact isometry-constant computation by support enumeration.
/// delta is the smallest constant making
///   (1 - delta) ||x||^2 <= ||Dx||^2 <= (1 + delta) ||x||^2
/// true for every signal of the enumerated block sparsity; it may reach or
/// exceed 1 for degenerate matrices (then `satisfied` is false).
struct RipCertificate {
  int order = 0;    // enumerated block sparsity K
  int block_d = 1;  // 1 = standard (scalar) constant
  double delta = 0.0;
  BlockSupport worst_support;       // first support attaining delta, lexicographic
  EigenExtremes extremes_at_worst;  // Gram extremes on that support
  /// Recovery threshold for signals of sparsity order-1, i.e. 1/(2*sqrt(order)).
  double theorem1_threshold = 0.0;
  bool satisfied = false;  // delta < theorem1_threshold
  std::uint64_t supports_enumerated = 0;
};

/// Exact block isometry constant of order K: enumerates every K-subset of
/// blocks and takes Gram eigenvalue extremes of each column submatrix. Exact
/// because ||Dx||^2/||x||^2 over x on a fixed support ranges over precisely
/// [lambda_min, lambda_max] of that Gram.
///
/// Throws BudgetExceeded when C(M, K) exceeds `budget`.
RipCertificate block_rip_constant_exact(const Matrix& d, const BlockLayout& layout, int order,
                                        std::uint64_t budget = 2'000'000, int threads = 1);

/// Standard (scalar) isometry constant: the block constant at d = 1.
RipCertificate rip_constant_exact(const Matrix& d, int order, std::uint64_t budget = 2'000'000,
                                  int threads = 1);

/// Extreme Gram eigenvalues of A = P_perp(D_support) D over all Kp-subsets of
/// blocks disjoint from `support`; A is built by projecting every column of D
/// onto the orthogonal complement of the selected span.
EigenExtremes restricted_rip_extremes_of_a(const Matrix& d, const BlockLayout& layout,
                                           const BlockSupport& support, int kp,
                                           std::uint64_t budget = 2'000'000);

/// Signed violation of |<Du, Dv> - <u, v>| <= delta ||u|| ||v||
/// (left minus right; <= 0 means the inequality holds).
double verify_lemma1(const Matrix& d, const BlockLayout& layout, const BlockSignal& u,
                     const BlockSignal& v, double delta);

/// Signed violation of ||(D'Dx)[j] - x[j]|| <= delta ||x|| for one block j.
double verify_corollary1(const Matrix& d, const BlockLayout& layout, const BlockSignal& x, int j,
                         double delta);

/// Builds h = A'A x_tilde with A = P_perp(D_support) D and returns the worst
/// signed violation of ||h[j] - x_tilde[j]|| <= delta/(1-delta) ||x_tilde||
/// over j outside the support. Throws SupportOverlap unless supp(x_tilde)
/// and `support` are disjoint.
double verify_lemma3(const Matrix& d, const BlockLayout& layout, const BlockSupport& support,
                     const BlockSignal& x_tilde, double delta);

struct IdentificationResult {
  bool passed = true;    // arg max block of h lies in supp(x_tilde)
  bool skipped = false;  // hypothesis failed; vacuous pass
};

/// Identification-step check: when ||x_tilde||_{2,inf} exceeds
/// 2 delta/(1-delta) ||x_tilde||_2, the largest block of h must be a support
/// block of x_tilde. Vacuous (skipped) when the hypothesis fails.
IdentificationResult check_identification(const BlockSignal& x_tilde, const BlockSignal& h,
                                          const BlockSupport& support, double delta);

/// Signed violation of ||x||_2 / sqrt(||x||_{2,0}) <= ||x||_{2,inf}
/// (holds for every nonzero x; equality when the nonzero blocks share one
/// norm). Throws ZeroSignal on x = 0.
double verify_lemma4(const BlockSignal& x);

/// Recovery threshold 1/(2*sqrt(K+1)) for block sparsity K.
double theorem1_threshold(int sparsity);

/// Scalar-pursuit threshold 1/(3*sqrt(K*d)); always below theorem1_threshold.
double omp_threshold(int sparsity, int block_len);

enum class LemmaId { L1, L2, C1, L3, C2, L4 };

const char* to_string(LemmaId id);

/// Aggregate over a sweep of one inequality: worst signed violation and a
/// reproducible description of the trial attaining it.
struct LemmaReport {
  LemmaId id = LemmaId::L1;
  std::uint64_t trials = 0;
  double max_violation = 0.0;
  std::string witness;
  std::uint64_t skipped = 0;  // identification trials whose hypothesis failed

  bool passed(double tol = 1e-10) const { return max_violation <= tol; }
};

struct LemmaSuiteConfig {
  std::uint64_t lemma1_pairs = 10'000;
  std::uint64_t corollary1_signals = 1'000;
  int lemma3_draws = 7;               // coefficient draws per (support, set) pair
  std::uint64_t identification_draws = 1'000;
  std::uint64_t lemma4_signals = 100'000;
  std::uint64_t seed = 1;
  std::uint64_t budget = 2'000'000;
};

struct LemmaSuiteResult {
  RipCertificate certificate;
  std::vector<LemmaReport> reports;  // order: L1, L2, C1, L3, C2, L4
};

/// Runs every inequality checker against the exact constant of `d` at the
/// given order, with seeded sweeps sized by the config. All reported
/// violations should sit at numerical noise (<= 1e-10).
LemmaSuiteResult run_lemma_suite(const Matrix& d, const BlockLayout& layout, int order,
                                 const LemmaSuiteConfig& config = {});

}  // namespace bomp
