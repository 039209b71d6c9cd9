#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "adcgs/baselines.hpp"
#include "adcgs/bench.hpp"
#include "adcgs/data_io.hpp"
#include "adcgs/errors.hpp"
#include "adcgs/inner_cg.hpp"
#include "adcgs/restart.hpp"
#include "adcgs/solver.hpp"

namespace py = pybind11;
using namespace adcgs;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

DenseVector to_vector(const Array& a) {
  if (a.ndim() != 1) throw py::value_error("expected a 1-d array");
  return DenseVector(std::vector<double>(a.data(), a.data() + a.size()));
}

Array to_array(const DenseVector& v) {
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Matrix to_matrix(const Array& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-d array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  return Matrix::dense(rows, cols, std::vector<double>(a.data(), a.data() + a.size()));
}

Array matrix_to_array(const Matrix& m) {
  Array out({static_cast<py::ssize_t>(m.rows()), static_cast<py::ssize_t>(m.cols())});
  const std::vector<double> dense = m.to_dense();
  std::copy(dense.begin(), dense.end(), out.mutable_data());
  return out;
}

py::dict record_to_dict(const TraceRecord& r) {
  py::dict d;
  d["k"] = r.k;
  d["foo_calls"] = r.foo_calls;
  d["lmo_calls"] = r.lmo_calls;
  d["elapsed_seconds"] = r.elapsed_seconds;
  d["f_value"] = r.f_value;
  d["primal_gap"] = r.primal_gap ? py::cast(*r.primal_gap) : py::none();
  d["fw_gap"] = r.fw_gap;
  d["eta_k"] = r.eta_k;
  d["tau_k"] = r.tau_k;
  d["delta_k"] = r.delta_k;
  d["L_k"] = r.L_k;
  d["L_hat_k"] = r.L_hat_k;
  d["inner_iters_used"] = r.inner_iters_used;
  d["hit_cap"] = r.hit_cap;
  d["certified_bound"] = r.certified_bound ? py::cast(*r.certified_bound) : py::none();
  return d;
}

py::dict result_to_dict(const RunResult& r) {
  py::list trace;
  for (const auto& rec : r.trace) trace.append(record_to_dict(rec));
  py::dict d;
  d["trace"] = trace;
  d["x"] = to_array(r.x_final);
  d["x_average"] = r.x_average ? py::object(to_array(*r.x_average)) : py::object(py::none());
  d["foo_calls"] = r.counters.foo_calls;
  d["lmo_calls"] = r.counters.lmo_calls;
  d["hit_cap_count"] = r.flags.hit_cap_count;
  d["no_global_L"] = r.flags.no_global_L;
  d["stalled"] = r.flags.stalled;
  d["diverged"] = r.flags.diverged;
  d["warnings"] = r.flags.warnings;
  d["stopped_on_gap"] = r.stopped_on_gap;
  return d;
}

}  // namespace

PYBIND11_MODULE(_adcgs, m) {
  m.doc() = "Adaptive conditional gradient sliding";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", base);
  py::register_exception<UnsupportedOperation>(m, "UnsupportedOperation", base);
  py::register_exception<NumericalError>(m, "NumericalError", base);
  py::register_exception<ContractViolation>(m, "ContractViolation", base);
  py::register_exception<ParseError>(m, "ParseError", base);

  py::class_<FeasibleSet>(m, "FeasibleSet")
      .def_static("simplex", &FeasibleSet::simplex, py::arg("n"))
      .def_static("l2_ball", &FeasibleSet::l2_ball, py::arg("n"), py::arg("radius") = 1.0)
      .def_static("ksparse", &FeasibleSet::ksparse, py::arg("n"), py::arg("k"),
                  py::arg("kappa") = 1.0)
      .def_static("parse", &FeasibleSet::parse, py::arg("config"), py::arg("n"))
      .def_property_readonly("dimension", &FeasibleSet::dimension)
      .def_property_readonly("diameter", &FeasibleSet::diameter)
      .def_property_readonly("supports_projection", &FeasibleSet::supports_projection)
      .def("lmo",
           [](const FeasibleSet& s, const Array& c) {
             OracleCounters counters;
             return to_array(s.lmo(to_vector(c), counters));
           })
      .def("project",
           [](const FeasibleSet& s, const Array& x) {
             OracleCounters counters;
             return to_array(s.project(to_vector(x), counters));
           })
      .def("fw_gap",
           [](const FeasibleSet& s, const Array& g, const Array& x) {
             OracleCounters counters;
             return s.fw_gap(to_vector(g), to_vector(x), counters);
           })
      .def("contains",
           [](const FeasibleSet& s, const Array& x, double tol) {
             return s.contains(to_vector(x), tol);
           },
           py::arg("x"), py::arg("tol") = 1e-9)
      .def("default_start", [](const FeasibleSet& s) { return to_array(s.default_start()); })
      .def("__repr__", [](const FeasibleSet& s) { return "FeasibleSet(" + s.describe() + ")"; });

  py::class_<Objective>(m, "Objective")
      .def_static("least_squares",
                  [](const Array& a, const Array& b) {
                    return Objective::least_squares(to_matrix(a), to_vector(b));
                  })
      .def_static("lp_loss",
                  [](const Array& a, const Array& b, double p) {
                    return Objective::lp_loss(to_matrix(a), to_vector(b), p);
                  })
      .def_static("logistic",
                  [](const Array& a, const Array& b) {
                    return Objective::logistic(to_matrix(a), to_vector(b));
                  })
      .def_property_readonly("dimension", &Objective::dimension)
      .def("value", [](const Objective& o, const Array& x) { return o.value(to_vector(x)); })
      .def("gradient",
           [](const Objective& o, const Array& x) {
             OracleCounters counters;
             return to_array(o.gradient(to_vector(x), counters));
           })
      .def("bregman",
           [](const Objective& o, const Array& x, const Array& y) {
             OracleCounters counters;
             return o.bregman(to_vector(x), to_vector(y), counters);
           })
      .def("global_smoothness", &Objective::global_smoothness)
      .def("strong_convexity", &Objective::strong_convexity)
      .def("__repr__", [](const Objective& o) { return "Objective(" + o.describe() + ")"; });

  m.def(
      "solve_subproblem",
      [](const FeasibleSet& set, const Array& g, const Array& u, double eta, double delta,
         std::int64_t max_inner) {
        const DenseVector gv = to_vector(g);
        const DenseVector uv = to_vector(u);
        OracleCounters counters;
        const InnerResult r = solve_subproblem(set, {gv, uv, eta, delta, max_inner}, counters);
        py::dict d;
        d["z"] = to_array(r.z);
        d["iters"] = r.iters;
        d["final_gap"] = r.final_gap;
        d["hit_cap"] = r.hit_cap;
        return d;
      },
      py::arg("set"), py::arg("g"), py::arg("u"), py::arg("eta"), py::arg("delta"),
      py::arg("max_inner") = 50);
  m.def("inner_iteration_cap", &inner_iteration_cap, py::arg("diameter"), py::arg("eta"),
        py::arg("delta"));

  m.def(
      "run_adcgs",
      [](const Objective& obj, const FeasibleSet& set, const std::optional<Array>& x0,
         const std::string& schedule, double alpha, std::int64_t max_iter, double stop_gap,
         std::int64_t max_inner, std::int64_t N, bool line_search,
         std::optional<double> f_ref) {
        ScheduleConfig cfg;
        cfg.variant = parse_schedule_variant(schedule);
        cfg.alpha = alpha;
        cfg.max_outer = max_iter;
        cfg.outer_stop_gap = stop_gap;
        cfg.max_inner = max_inner;
        cfg.N = N;
        if (line_search) cfg.eta1_mode = Eta1Mode::line_search;
        RunOptions options;
        options.f_ref = f_ref;
        const DenseVector start = x0 ? to_vector(*x0) : set.default_start();
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run_adcgs(obj, set, cfg, start, options);
        }
        return result_to_dict(r);
      },
      py::arg("objective"), py::arg("set"), py::arg("x0") = py::none(),
      py::arg("schedule") = "cor3", py::arg("alpha") = 1.0, py::arg("max_iter") = 1000,
      py::arg("stop_gap") = 1e-10, py::arg("max_inner") = 50, py::arg("N") = 100,
      py::arg("line_search") = false, py::arg("f_ref") = py::none());

  m.def(
      "run_baseline",
      [](const std::string& algorithm, const Objective& obj, const FeasibleSet& set,
         const std::optional<Array>& x0, std::int64_t max_iter, double stop_gap,
         std::optional<double> L, double alpha, std::optional<double> f_ref) {
        BaselineConfig cfg;
        cfg.algorithm = parse_baseline(algorithm);
        cfg.max_iter = max_iter;
        cfg.stop_gap = stop_gap;
        cfg.L_override = L;
        cfg.alpha = alpha;
        RunOptions options;
        options.f_ref = f_ref;
        const DenseVector start = x0 ? to_vector(*x0) : set.default_start();
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run_baseline(obj, set, cfg, start, options);
        }
        return result_to_dict(r);
      },
      py::arg("algorithm"), py::arg("objective"), py::arg("set"), py::arg("x0") = py::none(),
      py::arg("max_iter") = 1000, py::arg("stop_gap") = 1e-10, py::arg("L") = py::none(),
      py::arg("alpha") = 0.5, py::arg("f_ref") = py::none());

  m.def("restart_horizon", &restart_horizon, py::arg("mu"), py::arg("L"),
        py::arg("beta") = kMaxBeta, py::arg("eta1") = 0.1, py::arg("gamma") = 2.0);
  m.def(
      "run_restarted",
      [](const Objective& obj, const FeasibleSet& set, double mu, double L, double phi0,
         double eta1, int stages, const std::optional<Array>& w0) {
        RestartConfig rcfg;
        rcfg.mu = mu;
        rcfg.L = L;
        rcfg.phi0 = phi0;
        rcfg.eta1 = eta1;
        rcfg.stages = stages;
        const RestartResult r =
            run_restarted(obj, set, rcfg, w0 ? to_vector(*w0) : set.default_start());
        py::list values;
        for (const auto& s : r.stages) values.append(s.f_value);
        py::dict d;
        d["horizon"] = r.horizon;
        d["stage_values"] = values;
        d["w"] = to_array(r.w);
        d["foo_calls"] = r.counters.foo_calls;
        return d;
      },
      py::arg("objective"), py::arg("set"), py::arg("mu"), py::arg("L"), py::arg("phi0"),
      py::arg("eta1"), py::arg("stages") = 1, py::arg("w0") = py::none());

  m.def(
      "reference_solution",
      [](const Objective& obj, const FeasibleSet& set, double tol, std::int64_t max_iter) {
        const ReferenceSolution r = reference_solution(obj, set, tol, max_iter);
        return py::make_tuple(to_array(r.x), r.f_value, r.converged);
      },
      py::arg("objective"), py::arg("set"), py::arg("tol") = 1e-13,
      py::arg("max_iter") = 100000);

  m.def(
      "generate_synthetic",
      [](std::size_t m_rows, std::size_t n, std::uint64_t seed, const std::string& kind,
         double radius) {
        const SyntheticInstance inst =
            generate_synthetic({m_rows, n, seed, parse_synthetic_kind(kind), radius});
        return py::make_tuple(matrix_to_array(inst.data.A), to_array(inst.data.b),
                              to_array(inst.x_hint));
      },
      py::arg("m"), py::arg("n"), py::arg("seed") = 0, py::arg("kind") = "simplex_lsq",
      py::arg("radius") = 1.0);

  m.def(
      "load_libsvm",
      [](const std::string& path, bool binary) {
        const Dataset ds =
            load_libsvm(path, binary ? LabelMode::binary : LabelMode::regression);
        return py::make_tuple(matrix_to_array(ds.A), to_array(ds.b));
      },
      py::arg("path"), py::arg("binary") = true);

  m.def("trace_csv_columns", &trace_csv_columns);
  m.def("summarize", &summarize, py::arg("csv_paths"), py::arg("out_path"));
}
