#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "bomp/io.hpp"
#include "bomp/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitBudget = 4;
constexpr int kExitAssert = 5;
constexpr int kExitIo = 6;

bool use_color() {
  return ::isatty(::fileno(stdout)) != 0 && std::getenv("NO_COLOR") == nullptr;
}

std::string pass_fail(bool ok) {
  if (!use_color()) {
    return ok ? "PASS" : "FAIL";
  }
  return ok ? "\x1b[32mPASS\x1b[0m" : "\x1b[31mFAIL\x1b[0m";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw bomp::IoError("cannot open '" + path + "' for reading");
  }
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) {
    throw bomp::IoError("cannot open '" + path + "' for writing");
  }
  out << text;
  out.flush();
  if (!out) {
    throw bomp::IoError("write to '" + path + "' failed");
  }
}

bomp::Vector read_signal_file(const std::string& path) {
  const bomp::Matrix m = bomp::read_matrix_file(path);
  if (m.cols() == 1) {
    return m.col(0);
  }
  if (m.rows() == 1) {
    return m.row(0).transpose();
  }
  throw bomp::FormatError(path + ": a signal file needs a single row or column");
}

struct CommonOpts {
  std::string config_path;
  std::string matrix_path;
  std::string out_path;
  std::string format = "csv";
  std::optional<int> threads;
  std::optional<std::uint64_t> budget;
  std::uint64_t index = 0;
  bool hard_assert = false;
};

bomp::RunConfig load_config(const CommonOpts& opts) {
  if (opts.config_path.empty()) {
    throw bomp::ValidationError("config", "this command needs --config");
  }
  bomp::RunConfig cfg = bomp::parse_config(read_text_file(opts.config_path));
  if (opts.threads) {
    cfg.threads = *opts.threads;
  }
  if (opts.budget) {
    cfg.budget = *opts.budget;
  }
  return cfg;
}

/// Matrix under study: an explicit file wins, otherwise a seeded draw.
bomp::Matrix load_instance(const CommonOpts& opts, const bomp::RunConfig& cfg,
                           nlohmann::json& meta) {
  if (!opts.matrix_path.empty()) {
    meta["source"] = {{"matrix", opts.matrix_path}};
    return bomp::read_matrix_file(opts.matrix_path);
  }
  meta["source"] = {{"generated_index", opts.index}};
  return bomp::gen_matrix(cfg.ensemble, opts.index);
}

void emit(const CommonOpts& opts, const std::string& text) {
  if (opts.out_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(opts.out_path, text);
  }
}

int run_rip(const CommonOpts& opts) {
  bomp::RipCertificate cert;
  nlohmann::json meta;
  if (!opts.config_path.empty()) {
    const bomp::RunConfig cfg = load_config(opts);
    meta = bomp::config_to_json(cfg);
    const bomp::Matrix d = load_instance(opts, cfg, meta);
    cert = bomp::block_rip_constant_exact(d, cfg.ensemble.layout, cfg.order, cfg.budget,
                                          cfg.threads);
  } else {
    if (opts.matrix_path.empty()) {
      throw bomp::ValidationError("matrix", "rip needs --config or --matrix");
    }
    throw bomp::ValidationError("config", "rip with --matrix also needs --config for d/order");
  }

  std::cout << "order " << cert.order << "  d " << cert.block_d << "  delta "
            << bomp::fmt_g12(cert.delta) << "  threshold "
            << bomp::fmt_g12(cert.theorem1_threshold) << "  satisfied "
            << (cert.satisfied ? "true" : "false") << "  worst "
            << cert.worst_support.to_string() << "  supports " << cert.supports_enumerated
            << "\n";
  if (!opts.out_path.empty()) {
    if (opts.format == "json") {
      emit(opts, bomp::rip_json(cert, meta));
    } else {
      emit(opts, bomp::rip_csv(cert));
    }
  }
  return kExitOk;
}

int run_recover(const CommonOpts& opts, const std::string& signal_path) {
  const bomp::RunConfig cfg = load_config(opts);
  nlohmann::json meta = bomp::config_to_json(cfg);
  const bomp::Matrix d = load_instance(opts, cfg, meta);

  bomp::Vector y;
  bomp::BlockSignal truth = bomp::BlockSignal::zero(cfg.ensemble.layout);
  if (!signal_path.empty()) {
    const bomp::Vector x = read_signal_file(signal_path);
    truth = bomp::BlockSignal::create(cfg.ensemble.layout, x);
    meta["source"]["signal"] = signal_path;
  } else {
    truth = bomp::gen_block_sparse_signal(cfg.ensemble, opts.index);
  }
  y = d * truth.values;

  const bomp::PursuitTrace trace = bomp::block_omp(
      d, y, cfg.ensemble.layout, cfg.block_pursuit_config(cfg.ensemble.sparsity));

  std::printf("%5s  %6s  %14s\n", "iter", "block", "residual");
  int iter = 0;
  for (const bomp::PursuitStep& s : trace.steps) {
    std::printf("%5d  %6d  %14s\n", ++iter, s.chosen_block,
                bomp::fmt_g12(s.residual_norm).c_str());
  }
  std::cout << "support " << trace.final_state.support.to_string() << "\n"
            << "termination " << bomp::to_string(trace.termination) << "\n"
            << "residual_norm " << bomp::fmt_g12(trace.final_state.residual.norm()) << "\n";
  std::cout << "estimate";
  for (Eigen::Index i = 0; i < trace.final_state.estimate.values.size(); ++i) {
    std::cout << ' ' << bomp::fmt_g12(trace.final_state.estimate.values(i));
  }
  std::cout << "\n";
  const double err = (trace.final_state.estimate.values - truth.values).norm();
  std::cout << "error " << bomp::fmt_g12(err) << "\n";

  if (!opts.out_path.empty()) {
    emit(opts, bomp::trace_json(trace, meta));
  }
  return kExitOk;
}

int run_verify(const CommonOpts& opts) {
  const bomp::RunConfig cfg = load_config(opts);
  nlohmann::json meta = bomp::config_to_json(cfg);
  const bomp::Matrix d = load_instance(opts, cfg, meta);

  const bomp::LemmaSuiteResult suite =
      bomp::run_lemma_suite(d, cfg.ensemble.layout, cfg.order, cfg.lemma_config());
  const bomp::Theorem1Report theorem1 = bomp::verify_theorem1_exhaustive(
      d, cfg.ensemble.layout, cfg.ensemble.sparsity, cfg.draws_per_support, cfg.ensemble.seed,
      cfg.ensemble.coeff_model, cfg.budget);

  const bomp::RipCertificate& cert = suite.certificate;
  std::cout << "delta " << bomp::fmt_g12(cert.delta) << " at order " << cert.order
            << " (threshold " << bomp::fmt_g12(cert.theorem1_threshold) << ", "
            << (cert.satisfied ? "satisfied" : "not satisfied") << ")\n\n";

  bool all_ok = true;
  std::printf("%-9s %9s %9s %14s  %s\n", "check", "trials", "skipped", "max_violation",
              "result");
  for (const bomp::LemmaReport& rep : suite.reports) {
    const bool ok = rep.passed();
    all_ok = all_ok && ok;
    std::printf("%-9s %9llu %9llu %14s  %s\n", bomp::to_string(rep.id),
                static_cast<unsigned long long>(rep.trials),
                static_cast<unsigned long long>(rep.skipped),
                bomp::fmt_g12(rep.max_violation).c_str(), pass_fail(ok).c_str());
    if (!ok && !rep.witness.empty()) {
      std::cout << "          worst: " << rep.witness << "\n";
    }
  }
  const bool th_ok = !theorem1.asserted || theorem1.all_exact;
  all_ok = all_ok && th_ok;
  std::printf("%-9s %9llu %9llu %14s  %s\n", "theorem1",
              static_cast<unsigned long long>(theorem1.trials),
              static_cast<unsigned long long>(theorem1.trials - theorem1.successes),
              theorem1.asserted ? "asserted" : "report-only", pass_fail(th_ok).c_str());
  std::cout << "theorem1 sweep: " << theorem1.supports_visited << " supports x "
            << theorem1.draws_per_support << " draws, max iterations "
            << theorem1.max_iterations_observed << "\n";

  if (!opts.out_path.empty()) {
    if (opts.format == "json") {
      emit(opts, bomp::verify_json(suite, theorem1, meta));
    } else {
      emit(opts, bomp::verify_csv(suite, theorem1));
    }
  }
  if (opts.hard_assert && !all_ok) {
    return kExitAssert;
  }
  return kExitOk;
}

int run_sweep(const CommonOpts& opts) {
  const bomp::RunConfig cfg = load_config(opts);
  const nlohmann::json meta = bomp::config_to_json(cfg);
  const bomp::SweepGrid grid = bomp::phase_sweep(cfg.sweep_spec());
  const std::string text =
      opts.format == "json" ? bomp::sweep_json(grid, meta) : bomp::sweep_csv(grid);
  emit(opts, text);
  if (!opts.out_path.empty()) {
    std::cout << "wrote " << grid.cells.size() << " cells to " << opts.out_path << "\n";
  }
  return kExitOk;
}

int run_gen(const CommonOpts& opts, const std::string& what) {
  const bomp::RunConfig cfg = load_config(opts);
  if (opts.out_path.empty()) {
    throw bomp::ValidationError("out", "gen needs --out");
  }
  // single-line config echo keeps generated files self-describing
  const std::vector<std::string> comments = {"config " + bomp::config_to_json(cfg).dump(),
                                             "index " + std::to_string(opts.index)};
  if (what == "matrix") {
    bomp::write_matrix_file(opts.out_path, bomp::gen_matrix(cfg.ensemble, opts.index), comments);
  } else if (what == "signal") {
    const bomp::BlockSignal x = bomp::gen_block_sparse_signal(cfg.ensemble, opts.index);
    bomp::write_matrix_file(opts.out_path, x.values, comments);
  } else {
    throw bomp::ValidationError("what", "must be 'matrix' or 'signal'");
  }
  std::cout << "wrote " << what << " to " << opts.out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"block-sparse recovery, exact isometry certification, and phase sweeps"};
  app.set_version_flag("--version", bomp::version());
  app.require_subcommand(1);

  CommonOpts opts;
  std::string signal_path;
  std::string what = "matrix";

  const auto add_common = [&opts](CLI::App* cmd, bool with_format) {
    cmd->add_option("--config", opts.config_path, "JSON config file");
    cmd->add_option("--matrix", opts.matrix_path, "matrix file ('# dense L N' text format)");
    cmd->add_option("--out", opts.out_path, "output file");
    if (with_format) {
      cmd->add_option("--format", opts.format, "output format")
          ->check(CLI::IsMember({"csv", "json"}));
    }
    cmd->add_option("--threads", opts.threads, "worker threads")->check(CLI::Range(1, 4096));
    cmd->add_option("--budget", opts.budget, "enumeration cap (supports)");
    cmd->add_option("--index", opts.index, "trial index for seeded draws");
  };

  CLI::App* rip = app.add_subcommand("rip", "certify isometry constants of a matrix");
  add_common(rip, true);

  CLI::App* recover = app.add_subcommand("recover", "run one greedy pursuit and print the trace");
  add_common(recover, false);
  recover->add_option("--signal", signal_path, "signal file (single row or column)");

  CLI::App* verify = app.add_subcommand("verify", "run the inequality suite and the exhaustive recovery sweep");
  add_common(verify, true);
  verify->add_flag("--assert", opts.hard_assert, "fail the process on any FAIL row");

  CLI::App* sweep = app.add_subcommand("sweep", "phase-transition grid over (L, K)");
  add_common(sweep, true);

  CLI::App* gen = app.add_subcommand("gen", "write a seeded matrix or signal to a file");
  add_common(gen, false);
  gen->add_option("--what", what, "object to generate")
      ->check(CLI::IsMember({"matrix", "signal"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (app.got_subcommand(rip)) {
      return run_rip(opts);
    }
    if (app.got_subcommand(recover)) {
      return run_recover(opts, signal_path);
    }
    if (app.got_subcommand(verify)) {
      return run_verify(opts);
    }
    if (app.got_subcommand(sweep)) {
      return run_sweep(opts);
    }
    if (app.got_subcommand(gen)) {
      return run_gen(opts, what);
    }
  } catch (const bomp::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const bomp::BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const bomp::ValidationError& e) {
    std::cerr << "invalid " << e.field() << ": " << e.what() << "\n";
    return kExitValidation;
  } catch (const bomp::InvalidSpec& e) {
    std::cerr << "invalid spec: " << e.what() << "\n";
    return kExitValidation;
  } catch (const bomp::FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kExitIo;
  } catch (const bomp::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const bomp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitOther;
  }
  return kExitOther;
}
