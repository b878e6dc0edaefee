#include "bomp/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "bomp/version.hpp"

namespace bomp {

std::string fmt_g12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string fmt_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool RunConfig::operator==(const RunConfig& o) const {
  return ensemble == o.ensemble && max_iterations == o.max_iterations &&
         residual_tol == o.residual_tol && zero_tol == o.zero_tol && budget == o.budget &&
         threads == o.threads && order == o.order && draws_per_support == o.draws_per_support &&
         lemma1_pairs == o.lemma1_pairs && corollary1_signals == o.corollary1_signals &&
         lemma3_draws == o.lemma3_draws && identification_draws == o.identification_draws &&
         lemma4_signals == o.lemma4_signals && sweep_rows == o.sweep_rows &&
         sweep_sparsity == o.sweep_sparsity;
}

SweepSpec RunConfig::sweep_spec() const {
  SweepSpec s;
  s.base = ensemble;
  s.rows_values = sweep_rows;
  s.sparsity_values = sweep_sparsity;
  s.threads = threads;
  return s;
}

LemmaSuiteConfig RunConfig::lemma_config() const {
  LemmaSuiteConfig c;
  c.lemma1_pairs = lemma1_pairs;
  c.corollary1_signals = corollary1_signals;
  c.lemma3_draws = lemma3_draws;
  c.identification_draws = identification_draws;
  c.lemma4_signals = lemma4_signals;
  c.seed = ensemble.seed;
  c.budget = budget;
  return c;
}

PursuitConfig RunConfig::block_pursuit_config(int sparsity) const {
  PursuitConfig c;
  c.max_iterations = max_iterations > 0 ? max_iterations : sparsity;
  c.residual_tol = residual_tol;
  c.zero_tol = zero_tol;
  return c;
}

PursuitConfig RunConfig::scalar_pursuit_config(int sparsity) const {
  PursuitConfig c;
  c.max_iterations = max_iterations > 0 ? max_iterations : sparsity * ensemble.layout.d;
  c.residual_tol = residual_tol;
  c.zero_tol = zero_tol;
  return c;
}

namespace {

using nlohmann::json;

const char* const kTopKeys[] = {"L",
                                "N",
                                "d",
                                "K",
                                "seed",
                                "trials",
                                "coeff_model",
                                "matrix_model",
                                "normalize_columns",
                                "epsilon",
                                "max_iterations",
                                "residual_tol",
                                "zero_tol",
                                "budget",
                                "threads",
                                "order",
                                "draws_per_support",
                                "lemma1_pairs",
                                "corollary1_signals",
                                "lemma3_draws",
                                "identification_draws",
                                "lemma4_signals",
                                "sweep"};

bool key_in(const std::string& key, const char* const* names, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    if (key == names[i]) {
      return true;
    }
  }
  return false;
}

long long as_integer(const json& v, const std::string& key) {
  if (!v.is_number_integer()) {
    throw ValidationError(key, "must be an integer");
  }
  return v.get<long long>();
}

int bounded_int(const json& v, const std::string& key, long long lo, long long hi) {
  const long long n = as_integer(v, key);
  if (n < lo || n > hi) {
    throw ValidationError(key, "must lie in " + std::to_string(lo) + ".." + std::to_string(hi));
  }
  return static_cast<int>(n);
}

std::uint64_t unsigned_int(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) {
    return v.get<std::uint64_t>();
  }
  const long long n = as_integer(v, key);
  if (n < 0) {
    throw ValidationError(key, "must be non-negative");
  }
  return static_cast<std::uint64_t>(n);
}

double finite_number(const json& v, const std::string& key, double lo) {
  if (!v.is_number()) {
    throw ValidationError(key, "must be a number");
  }
  const double x = v.get<double>();
  if (!std::isfinite(x) || x < lo) {
    throw ValidationError(key, "must be finite and at least " + fmt_g12(lo));
  }
  return x;
}

std::string string_value(const json& v, const std::string& key) {
  if (!v.is_string()) {
    throw ValidationError(key, "must be a string");
  }
  return v.get<std::string>();
}

bool bool_value(const json& v, const std::string& key) {
  if (!v.is_boolean()) {
    throw ValidationError(key, "must be a boolean");
  }
  return v.get<bool>();
}

std::vector<int> int_axis(const json& v, const std::string& key, long long lo, long long hi) {
  if (!v.is_array() || v.empty()) {
    throw ValidationError(key, "must be a non-empty array of integers");
  }
  std::vector<int> out;
  out.reserve(v.size());
  for (const json& e : v) {
    out.push_back(bounded_int(e, key, lo, hi));
  }
  return out;
}

RunConfig config_from_json(const json& doc) {
  if (!doc.is_object()) {
    throw ParseError("top level must be a JSON object");
  }
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!key_in(it.key(), kTopKeys, std::size(kTopKeys))) {
      throw ValidationError(it.key(), "unknown key");
    }
  }
  const auto need = [&doc](const char* key) -> const json& {
    if (!doc.contains(key)) {
      throw ValidationError(key, "required key is missing");
    }
    return doc.at(key);
  };
  const auto opt = [&doc](const char* key) -> const json* {
    return doc.contains(key) ? &doc.at(key) : nullptr;
  };

  RunConfig c;
  const int rows = bounded_int(need("L"), "L", 1, 1 << 20);
  const int n = bounded_int(need("N"), "N", 1, 1 << 20);
  const int d = bounded_int(need("d"), "d", 1, 1 << 20);
  BlockLayout layout;
  try {
    layout = BlockLayout::create(n, d);
  } catch (const LayoutMismatch& e) {
    throw ValidationError("d", e.what());
  }
  const int sparsity = bounded_int(need("K"), "K", 1, layout.m);

  c.ensemble.rows = rows;
  c.ensemble.layout = layout;
  c.ensemble.sparsity = sparsity;
  if (const json* v = opt("seed")) {
    c.ensemble.seed = unsigned_int(*v, "seed");
  }
  c.ensemble.trials = 100;
  if (const json* v = opt("trials")) {
    c.ensemble.trials = bounded_int(*v, "trials", 0, 100'000'000);
  }
  if (const json* v = opt("coeff_model")) {
    c.ensemble.coeff_model = coeff_model_from_string(string_value(*v, "coeff_model"));
  }
  if (const json* v = opt("matrix_model")) {
    c.ensemble.matrix_model = matrix_model_from_string(string_value(*v, "matrix_model"));
  }
  if (const json* v = opt("normalize_columns")) {
    c.ensemble.normalize_columns = bool_value(*v, "normalize_columns");
  }
  if (const json* v = opt("epsilon")) {
    c.ensemble.epsilon = finite_number(*v, "epsilon", 0.0);
  }

  if (const json* v = opt("max_iterations")) {
    c.max_iterations = bounded_int(*v, "max_iterations", 0, 1 << 20);
  }
  if (const json* v = opt("residual_tol")) {
    c.residual_tol = finite_number(*v, "residual_tol", 0.0);
  }
  if (const json* v = opt("zero_tol")) {
    c.zero_tol = finite_number(*v, "zero_tol", 0.0);
  }
  if (const json* v = opt("budget")) {
    c.budget = unsigned_int(*v, "budget");
    if (c.budget == 0) {
      throw ValidationError("budget", "must be at least 1");
    }
  }
  if (const json* v = opt("threads")) {
    c.threads = bounded_int(*v, "threads", 1, 4096);
  }
  c.order = sparsity + 1 <= layout.m ? sparsity + 1 : layout.m;
  if (const json* v = opt("order")) {
    c.order = bounded_int(*v, "order", 1, layout.m);
  }
  if (const json* v = opt("draws_per_support")) {
    c.draws_per_support = bounded_int(*v, "draws_per_support", 1, 1'000'000);
  }
  if (const json* v = opt("lemma1_pairs")) {
    c.lemma1_pairs = unsigned_int(*v, "lemma1_pairs");
  }
  if (const json* v = opt("corollary1_signals")) {
    c.corollary1_signals = unsigned_int(*v, "corollary1_signals");
  }
  if (const json* v = opt("lemma3_draws")) {
    c.lemma3_draws = bounded_int(*v, "lemma3_draws", 0, 1'000'000);
  }
  if (const json* v = opt("identification_draws")) {
    c.identification_draws = unsigned_int(*v, "identification_draws");
  }
  if (const json* v = opt("lemma4_signals")) {
    c.lemma4_signals = unsigned_int(*v, "lemma4_signals");
  }

  c.sweep_rows = {rows};
  c.sweep_sparsity = {sparsity};
  if (const json* v = opt("sweep")) {
    if (!v->is_object()) {
      throw ValidationError("sweep", "must be an object");
    }
    static const char* const kSweepKeys[] = {"L_values", "K_values"};
    for (auto it = v->begin(); it != v->end(); ++it) {
      if (!key_in(it.key(), kSweepKeys, std::size(kSweepKeys))) {
        throw ValidationError("sweep." + it.key(), "unknown key");
      }
    }
    if (v->contains("L_values")) {
      c.sweep_rows = int_axis(v->at("L_values"), "sweep.L_values", 1, 1 << 20);
    }
    if (v->contains("K_values")) {
      c.sweep_sparsity = int_axis(v->at("K_values"), "sweep.K_values", 1, layout.m);
    }
  }

  try {
    c.ensemble.validate();
  } catch (const InvalidSpec& e) {
    throw ValidationError("config", e.what());
  }
  return c;
}

json certificate_to_json(const RipCertificate& cert) {
  json j;
  j["order"] = cert.order;
  j["d"] = cert.block_d;
  j["delta"] = cert.delta;
  j["threshold"] = cert.theorem1_threshold;
  j["satisfied"] = cert.satisfied;
  j["worst_support"] = cert.worst_support.indices;
  j["lambda_min"] = cert.extremes_at_worst.lambda_min;
  j["lambda_max"] = cert.extremes_at_worst.lambda_max;
  j["supports_enumerated"] = cert.supports_enumerated;
  return j;
}

json document_shell(const json& meta) {
  json j;
  j["version"] = version();
  j["config"] = meta;
  return j;
}

std::vector<SweepCell> sorted_cells(const SweepGrid& grid) {
  std::vector<SweepCell> cells = grid.cells;
  std::sort(cells.begin(), cells.end(), [](const SweepCell& a, const SweepCell& b) {
    return a.rows != b.rows ? a.rows < b.rows : a.sparsity < b.sparsity;
  });
  return cells;
}

bool is_comment_or_blank(const std::string& line) {
  for (char ch : line) {
    if (ch == '#') {
      return true;
    }
    if (!std::isspace(static_cast<unsigned char>(ch))) {
      return false;
    }
  }
  return true;  // blank
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    out.push_back(tok);
  }
  return out;
}

long long parse_count(const std::string& tok, int line_no, const char* what) {
  char* end = nullptr;
  const long long v = std::strtoll(tok.c_str(), &end, 10);
  if (end != tok.c_str() + tok.size() || v < 1) {
    throw FormatError("line " + std::to_string(line_no) + ": bad " + what + " '" + tok + "'");
  }
  return v;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  return config_from_json(doc);
}

json config_to_json(const RunConfig& c) {
  json j;
  j["L"] = c.ensemble.rows;
  j["N"] = c.ensemble.layout.n;
  j["d"] = c.ensemble.layout.d;
  j["K"] = c.ensemble.sparsity;
  j["seed"] = c.ensemble.seed;
  j["trials"] = c.ensemble.trials;
  j["coeff_model"] = to_string(c.ensemble.coeff_model);
  j["matrix_model"] = to_string(c.ensemble.matrix_model);
  j["normalize_columns"] = c.ensemble.normalize_columns;
  j["epsilon"] = c.ensemble.epsilon;
  j["max_iterations"] = c.max_iterations;
  j["residual_tol"] = c.residual_tol;
  j["zero_tol"] = c.zero_tol;
  j["budget"] = c.budget;
  j["threads"] = c.threads;
  j["order"] = c.order;
  j["draws_per_support"] = c.draws_per_support;
  j["lemma1_pairs"] = c.lemma1_pairs;
  j["corollary1_signals"] = c.corollary1_signals;
  j["lemma3_draws"] = c.lemma3_draws;
  j["identification_draws"] = c.identification_draws;
  j["lemma4_signals"] = c.lemma4_signals;
  j["sweep"]["L_values"] = c.sweep_rows;
  j["sweep"]["K_values"] = c.sweep_sparsity;
  return j;
}

std::string config_echo(const RunConfig& config) { return config_to_json(config).dump(2) + "\n"; }

Matrix read_matrix(std::istream& in) {
  std::string line;
  int line_no = 0;
  long long rows = -1;
  long long cols = -1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::vector<std::string> tok = split_ws(line);
    if (tok.empty()) {
      continue;
    }
    if (tok.size() == 4 && tok[0] == "#" && tok[1] == "dense") {
      rows = parse_count(tok[2], line_no, "row count");
      cols = parse_count(tok[3], line_no, "column count");
      break;
    }
    throw FormatError("line " + std::to_string(line_no) + ": expected '# dense L N' header");
  }
  if (rows < 0) {
    throw FormatError("missing '# dense L N' header");
  }
  if (rows * cols > (1ll << 26)) {
    throw FormatError("matrix of " + std::to_string(rows) + "x" + std::to_string(cols) +
                      " entries is beyond this text format");
  }

  Matrix m(rows, cols);
  Eigen::Index r = 0;
  while (r < rows) {
    if (!std::getline(in, line)) {
      throw FormatError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(rows - r) + " more data rows");
    }
    ++line_no;
    if (is_comment_or_blank(line)) {
      continue;
    }
    const std::vector<std::string> tok = split_ws(line);
    if (static_cast<long long>(tok.size()) != cols) {
      throw FormatError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(cols) + " values, got " + std::to_string(tok.size()));
    }
    for (Eigen::Index j = 0; j < cols; ++j) {
      const std::string& t = tok[static_cast<std::size_t>(j)];
      char* end = nullptr;
      const double v = std::strtod(t.c_str(), &end);
      if (end != t.c_str() + t.size() || !std::isfinite(v)) {
        throw FormatError("line " + std::to_string(line_no) + ", entry " + std::to_string(j + 1) +
                          ": not a finite number '" + t + "'");
      }
      m(r, j) = v;
    }
    ++r;
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!is_comment_or_blank(line)) {
      throw FormatError("line " + std::to_string(line_no) + ": unexpected trailing data");
    }
  }
  return m;
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open '" + path + "' for reading");
  }
  try {
    return read_matrix(in);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_matrix(std::ostream& out, const Matrix& m, const std::vector<std::string>& comments) {
  out << "# dense " << m.rows() << ' ' << m.cols() << '\n';
  for (const std::string& c : comments) {
    out << "# " << c << '\n';
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) {
        out << ' ';
      }
      out << fmt_g17(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix_file(const std::string& path, const Matrix& m,
                       const std::vector<std::string>& comments) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  write_matrix(out, m, comments);
  out.flush();
  if (!out) {
    throw IoError("write to '" + path + "' failed");
  }
}

namespace {

void append_sweep_row(std::string& out, const SweepCell& cell, int d, const char* name,
                      const SweepCellAlg& alg) {
  out += std::to_string(cell.rows);
  out += ',';
  out += std::to_string(cell.sparsity);
  out += ',';
  out += std::to_string(d);
  out += ',';
  out += name;
  out += ',';
  out += std::to_string(alg.trials);
  out += ',';
  out += std::to_string(alg.successes);
  out += ',';
  out += fmt_g12(alg.success_rate);
  out += ',';
  out += fmt_g12(alg.mean_iterations);
  out += '\n';
}

json sweep_row_json(const SweepCell& cell, int d, const char* name, const SweepCellAlg& alg) {
  json j;
  j["L"] = cell.rows;
  j["K"] = cell.sparsity;
  j["d"] = d;
  j["algorithm"] = name;
  j["trials"] = alg.trials;
  j["successes"] = alg.successes;
  j["success_rate"] = alg.success_rate;
  j["mean_iterations"] = alg.mean_iterations;
  return j;
}

}  // namespace

std::string sweep_csv(const SweepGrid& grid) {
  std::string out = "L,K,d,algorithm,trials,successes,success_rate,mean_iterations\n";
  const int d = grid.spec.base.layout.d;
  for (const SweepCell& cell : sorted_cells(grid)) {
    // "block_omp" sorts before "omp", so rows stay ordered by algorithm name
    append_sweep_row(out, cell, d, "block_omp", cell.block);
    append_sweep_row(out, cell, d, "omp", cell.scalar);
  }
  return out;
}

std::string sweep_json(const SweepGrid& grid, const json& meta) {
  json doc = document_shell(meta);
  doc["rows"] = json::array();
  const int d = grid.spec.base.layout.d;
  for (const SweepCell& cell : sorted_cells(grid)) {
    doc["rows"].push_back(sweep_row_json(cell, d, "block_omp", cell.block));
    doc["rows"].push_back(sweep_row_json(cell, d, "omp", cell.scalar));
  }
  return doc.dump(2) + "\n";
}

std::string rip_csv(const RipCertificate& cert) {
  std::string out = "order,d,delta,threshold,satisfied,worst_support\n";
  out += std::to_string(cert.order);
  out += ',';
  out += std::to_string(cert.block_d);
  out += ',';
  out += fmt_g12(cert.delta);
  out += ',';
  out += fmt_g12(cert.theorem1_threshold);
  out += ',';
  out += cert.satisfied ? "true" : "false";
  out += ',';
  for (std::size_t i = 0; i < cert.worst_support.indices.size(); ++i) {
    if (i > 0) {
      out += ';';
    }
    out += std::to_string(cert.worst_support.indices[i]);
  }
  out += '\n';
  return out;
}

std::string rip_json(const RipCertificate& cert, const json& meta) {
  json doc = document_shell(meta);
  doc["certificate"] = certificate_to_json(cert);
  return doc.dump(2) + "\n";
}

std::string trace_json(const PursuitTrace& trace, const json& meta) {
  json doc = document_shell(meta);
  json steps = json::array();
  int iteration = 0;
  for (const PursuitStep& s : trace.steps) {
    json row;
    row["iteration"] = ++iteration;
    row["block"] = s.chosen_block;
    row["residual_norm"] = s.residual_norm;
    steps.push_back(std::move(row));
  }
  doc["trace"]["termination"] = to_string(trace.termination);
  doc["trace"]["iterations"] = trace.iterations();
  doc["trace"]["steps"] = std::move(steps);
  doc["trace"]["support"] = trace.final_state.support.indices;
  doc["trace"]["residual_norm"] = trace.final_state.residual.norm();
  std::vector<double> estimate(trace.final_state.estimate.values.data(),
                               trace.final_state.estimate.values.data() +
                                   trace.final_state.estimate.values.size());
  doc["trace"]["estimate"] = estimate;
  return doc.dump(2) + "\n";
}

namespace {

json lemma_report_json(const LemmaReport& rep) {
  json j;
  j["lemma"] = to_string(rep.id);
  j["trials"] = rep.trials;
  j["skipped"] = rep.skipped;
  j["max_violation"] = rep.max_violation;
  j["witness"] = rep.witness;
  j["passed"] = rep.passed();
  return j;
}

json theorem1_json(const Theorem1Report& rep) {
  json j;
  j["supports_visited"] = rep.supports_visited;
  j["draws_per_support"] = rep.draws_per_support;
  j["trials"] = rep.trials;
  j["successes"] = rep.successes;
  j["max_iterations_observed"] = rep.max_iterations_observed;
  j["asserted"] = rep.asserted;
  j["all_exact"] = rep.all_exact;
  j["passed"] = !rep.asserted || rep.all_exact;
  return j;
}

}  // namespace

std::string verify_json(const LemmaSuiteResult& suite, const Theorem1Report& theorem1,
                        const json& meta) {
  json doc = document_shell(meta);
  doc["certificate"] = certificate_to_json(suite.certificate);
  doc["lemmas"] = json::array();
  for (const LemmaReport& rep : suite.reports) {
    doc["lemmas"].push_back(lemma_report_json(rep));
  }
  doc["theorem1"] = theorem1_json(theorem1);
  return doc.dump(2) + "\n";
}

std::string verify_csv(const LemmaSuiteResult& suite, const Theorem1Report& theorem1) {
  std::string out = "check,trials,skipped,max_violation,passed\n";
  for (const LemmaReport& rep : suite.reports) {
    out += to_string(rep.id);
    out += ',';
    out += std::to_string(rep.trials);
    out += ',';
    out += std::to_string(rep.skipped);
    out += ',';
    out += fmt_g12(rep.max_violation);
    out += ',';
    out += rep.passed() ? "true" : "false";
    out += '\n';
  }
  out += "theorem1,";
  out += std::to_string(theorem1.trials);
  out += ',';
  out += std::to_string(theorem1.trials - theorem1.successes);
  out += ',';
  out += fmt_g12(static_cast<double>(theorem1.trials - theorem1.successes));
  out += ',';
  out += (!theorem1.asserted || theorem1.all_exact) ? "true" : "false";
  out += '\n';
  return out;
}

}  // namespace bomp
