#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "bomp/experiments.hpp"

namespace bomp {

/// Fully-resolved run parameters. Parsing applies documented defaults, so a
/// RunConfig always round-trips: parse_config(config_echo(c)) == c.
struct RunConfig {
  EnsembleSpec ensemble;

  // pursuit
  int max_iterations = 0;  // 0 = derive from sparsity (K blocks / K*d scalars)
  double residual_tol = 1e-10;
  double zero_tol = 0.0;  // 0 = scale-aware default

  // enumeration
  std::uint64_t budget = 2'000'000;
  int threads = 1;

  // certification / verification
  int order = 0;  // resolved to K+1 at parse time when absent
  int draws_per_support = 10;
  std::uint64_t lemma1_pairs = 10'000;
  std::uint64_t corollary1_signals = 1'000;
  int lemma3_draws = 7;
  std::uint64_t identification_draws = 1'000;
  std::uint64_t lemma4_signals = 100'000;

  // sweep axes; default to the ensemble's own L and K
  std::vector<int> sweep_rows;
  std::vector<int> sweep_sparsity;

  bool operator==(const RunConfig&) const;

  SweepSpec sweep_spec() const;
  LemmaSuiteConfig lemma_config() const;
  /// Stopping indices for one run at the given sparsity.
  PursuitConfig block_pursuit_config(int sparsity) const;
  PursuitConfig scalar_pursuit_config(int sparsity) const;
};

/// Parses and validates a JSON config document. Unknown keys are rejected.
/// Throws ParseError (malformed JSON, position in the message) or
/// ValidationError (named field + reason).
RunConfig parse_config(const std::string& text);

nlohmann::json config_to_json(const RunConfig& config);

/// Resolved-config JSON document; every run's metadata embeds this.
std::string config_echo(const RunConfig& config);

/// Text matrix format: a `# dense L N` header line, then L whitespace
/// separated rows of N decimal floats; further `#` lines are comments.
/// Values are written with 17 significant digits, so write-then-read is
/// bit exact for doubles. Throws FormatError with line/column context.
Matrix read_matrix(std::istream& in);
Matrix read_matrix_file(const std::string& path);
void write_matrix(std::ostream& out, const Matrix& m,
                  const std::vector<std::string>& comments = {});
void write_matrix_file(const std::string& path, const Matrix& m,
                       const std::vector<std::string>& comments = {});

/// CSV with header `L,K,d,algorithm,trials,successes,success_rate,mean_iterations`,
/// one row per (cell, algorithm), sorted by L, K, then algorithm name;
/// floats carry 12 significant digits.
std::string sweep_csv(const SweepGrid& grid);
std::string sweep_json(const SweepGrid& grid, const nlohmann::json& meta);

/// CSV with header `order,d,delta,threshold,satisfied,worst_support`; the
/// support is `;`-joined block indices.
std::string rip_csv(const RipCertificate& cert);
std::string rip_json(const RipCertificate& cert, const nlohmann::json& meta);

std::string trace_json(const PursuitTrace& trace, const nlohmann::json& meta);

std::string verify_json(const LemmaSuiteResult& suite, const Theorem1Report& theorem1,
                        const nlohmann::json& meta);
std::string verify_csv(const LemmaSuiteResult& suite, const Theorem1Report& theorem1);

/// %.12g / %.17g formatting used by the emitters.
std::string fmt_g12(double x);
std::string fmt_g17(double x);

}  // namespace bomp
