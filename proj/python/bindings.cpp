#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bomp/experiments.hpp"
#include "bomp/io.hpp"
#include "bomp/version.hpp"

namespace py = pybind11;

namespace {

bomp::BlockLayout layout_for(const bomp::Matrix& d, int block_len) {
  return bomp::BlockLayout::create(static_cast<int>(d.cols()), block_len);
}

bomp::PursuitConfig make_config(int max_iterations, double residual_tol, double zero_tol) {
  bomp::PursuitConfig c;
  c.max_iterations = max_iterations;
  c.residual_tol = residual_tol;
  c.zero_tol = zero_tol;
  return c;
}

bomp::EnsembleSpec make_spec(int rows, int n, int block_len, int sparsity, std::uint64_t seed,
                             const std::string& matrix_model, const std::string& coeff_model,
                             double epsilon, bool normalize_columns) {
  bomp::EnsembleSpec s;
  s.rows = rows;
  s.layout = bomp::BlockLayout::create(n, block_len);
  s.sparsity = sparsity;
  s.seed = seed;
  s.matrix_model = bomp::matrix_model_from_string(matrix_model);
  s.coeff_model = bomp::coeff_model_from_string(coeff_model);
  s.epsilon = epsilon;
  s.normalize_columns = normalize_columns;
  s.trials = 1;
  return s;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Block-sparse greedy recovery with exact block isometry certification";
  m.attr("__version__") = bomp::version();

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) {
        std::rethrow_exception(p);
      }
    } catch (const bomp::ValidationError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const bomp::InvalidSpec& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const bomp::LayoutMismatch& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const bomp::LengthMismatch& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const bomp::IndexOutOfRange& e) {
      PyErr_SetString(PyExc_IndexError, e.what());
    } catch (const bomp::Error& e) {
      PyErr_SetString(PyExc_RuntimeError, e.what());
    }
  });

  py::class_<bomp::PursuitTrace>(m, "PursuitTrace")
      .def_property_readonly("iterations", &bomp::PursuitTrace::iterations)
      .def_property_readonly("selections", &bomp::PursuitTrace::selections)
      .def_property_readonly(
          "termination",
          [](const bomp::PursuitTrace& t) { return std::string(bomp::to_string(t.termination)); })
      .def_property_readonly(
          "support", [](const bomp::PursuitTrace& t) { return t.final_state.support.indices; })
      .def_property_readonly(
          "estimate", [](const bomp::PursuitTrace& t) { return t.final_state.estimate.values; })
      .def_property_readonly(
          "residual", [](const bomp::PursuitTrace& t) { return t.final_state.residual; })
      .def_property_readonly(
          "residual_norm",
          [](const bomp::PursuitTrace& t) { return t.final_state.residual.norm(); })
      .def("__repr__", [](const bomp::PursuitTrace& t) {
        return "<PursuitTrace iterations=" + std::to_string(t.iterations()) + " termination=" +
               bomp::to_string(t.termination) + ">";
      });

  py::class_<bomp::RipCertificate>(m, "RipCertificate")
      .def_readonly("order", &bomp::RipCertificate::order)
      .def_readonly("d", &bomp::RipCertificate::block_d)
      .def_readonly("delta", &bomp::RipCertificate::delta)
      .def_readonly("threshold", &bomp::RipCertificate::theorem1_threshold)
      .def_readonly("satisfied", &bomp::RipCertificate::satisfied)
      .def_property_readonly(
          "worst_support", [](const bomp::RipCertificate& c) { return c.worst_support.indices; })
      .def_property_readonly(
          "lambda_min", [](const bomp::RipCertificate& c) { return c.extremes_at_worst.lambda_min; })
      .def_property_readonly(
          "lambda_max", [](const bomp::RipCertificate& c) { return c.extremes_at_worst.lambda_max; })
      .def_readonly("supports_enumerated", &bomp::RipCertificate::supports_enumerated)
      .def("__repr__", [](const bomp::RipCertificate& c) {
        return "<RipCertificate order=" + std::to_string(c.order) + " d=" +
               std::to_string(c.block_d) + " delta=" + bomp::fmt_g12(c.delta) + ">";
      });

  m.def(
      "block_omp",
      [](const bomp::Matrix& d, const bomp::Vector& y, int block_len, int max_iterations,
         double residual_tol, double zero_tol) {
        return bomp::block_omp(d, y, layout_for(d, block_len),
                               make_config(max_iterations, residual_tol, zero_tol));
      },
      py::arg("D"), py::arg("y"), py::arg("d"), py::arg("max_iterations") = 0,
      py::arg("residual_tol") = 1e-10, py::arg("zero_tol") = 0.0,
      "Greedy block pursuit on y = Dx with block length d.");

  m.def(
      "omp",
      [](const bomp::Matrix& d, const bomp::Vector& y, int max_iterations, double residual_tol,
         double zero_tol) {
        return bomp::omp(d, y, make_config(max_iterations, residual_tol, zero_tol));
      },
      py::arg("D"), py::arg("y"), py::arg("max_iterations") = 0, py::arg("residual_tol") = 1e-10,
      py::arg("zero_tol") = 0.0, "Conventional matching pursuit (unit blocks).");

  m.def(
      "block_rip_constant_exact",
      [](const bomp::Matrix& d, int block_len, int order, std::uint64_t budget, int threads) {
        return bomp::block_rip_constant_exact(d, layout_for(d, block_len), order, budget,
                                              threads);
      },
      py::arg("D"), py::arg("d"), py::arg("order"), py::arg("budget") = 2'000'000,
      py::arg("threads") = 1, "Exact block isometry constant by support enumeration.");

  m.def("rip_constant_exact", &bomp::rip_constant_exact, py::arg("D"), py::arg("order"),
        py::arg("budget") = 2'000'000, py::arg("threads") = 1,
        "Exact standard isometry constant (block length 1).");

  m.def("theorem1_threshold", &bomp::theorem1_threshold, py::arg("K"),
        "Block recovery threshold 1/(2*sqrt(K+1)).");
  m.def("omp_threshold", &bomp::omp_threshold, py::arg("K"), py::arg("d"),
        "Scalar recovery threshold 1/(3*sqrt(K*d)).");

  m.def("coherence", &bomp::coherence, py::arg("D"), py::arg("zero_tol") = 1e-12,
        "Largest normalized inner product between distinct columns.");

  m.def("solve_least_squares", &bomp::solve_least_squares, py::arg("A"), py::arg("y"),
        py::arg("rank_tol") = 1e-10, "Least-squares solve with a hard rank check.");

  m.def(
      "mixed_l20_norm",
      [](const bomp::Vector& x, int block_len, double zero_tol) {
        const bomp::BlockLayout layout =
            bomp::BlockLayout::create(static_cast<int>(x.size()), block_len);
        const bomp::BlockSignal s = bomp::BlockSignal::create(layout, x);
        return zero_tol > 0.0 ? bomp::mixed_l20_norm(s, zero_tol) : bomp::mixed_l20_norm(s);
      },
      py::arg("x"), py::arg("d"), py::arg("zero_tol") = 0.0,
      "Number of nonzero blocks of x at block length d.");

  m.def(
      "mixed_l2inf_norm",
      [](const bomp::Vector& x, int block_len) {
        const bomp::BlockLayout layout =
            bomp::BlockLayout::create(static_cast<int>(x.size()), block_len);
        return bomp::mixed_l2inf_norm(bomp::BlockSignal::create(layout, x));
      },
      py::arg("x"), py::arg("d"), "Largest block norm of x at block length d.");

  m.def(
      "gen_matrix",
      [](int rows, int n, int block_len, int sparsity, std::uint64_t seed, std::uint64_t index,
         const std::string& matrix_model, const std::string& coeff_model, double epsilon,
         bool normalize_columns) {
        return bomp::gen_matrix(make_spec(rows, n, block_len, sparsity, seed, matrix_model,
                                          coeff_model, epsilon, normalize_columns),
                                index);
      },
      py::arg("L"), py::arg("N"), py::arg("d"), py::arg("K"), py::arg("seed") = 0,
      py::arg("index") = 0, py::arg("matrix_model") = "gaussian_normalized",
      py::arg("coeff_model") = "gaussian", py::arg("epsilon") = 0.0,
      py::arg("normalize_columns") = false, "Seeded measurement matrix draw.");

  m.def(
      "gen_signal",
      [](int rows, int n, int block_len, int sparsity, std::uint64_t seed, std::uint64_t index,
         const std::string& matrix_model, const std::string& coeff_model, double epsilon,
         bool normalize_columns) {
        return bomp::gen_block_sparse_signal(
                   make_spec(rows, n, block_len, sparsity, seed, matrix_model, coeff_model,
                             epsilon, normalize_columns),
                   index)
            .values;
      },
      py::arg("L"), py::arg("N"), py::arg("d"), py::arg("K"), py::arg("seed") = 0,
      py::arg("index") = 0, py::arg("matrix_model") = "gaussian_normalized",
      py::arg("coeff_model") = "gaussian", py::arg("epsilon") = 0.0,
      py::arg("normalize_columns") = false, "Seeded block-sparse signal draw.");

  m.def("read_matrix_file", &bomp::read_matrix_file, py::arg("path"),
        "Read a '# dense L N' text matrix file.");
  m.def(
      "write_matrix_file",
      [](const std::string& path, const bomp::Matrix& mat) {
        bomp::write_matrix_file(path, mat);
      },
      py::arg("path"), py::arg("matrix"),
      "Write a matrix as '# dense L N' text (17 significant digits).");
}
