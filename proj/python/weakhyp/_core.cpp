#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "weakhyp/charpoly.hpp"
#include "weakhyp/eigenfield.hpp"
#include "weakhyp/energy.hpp"
#include "weakhyp/frequency.hpp"
#include "weakhyp/mollifier.hpp"
#include "weakhyp/pipeline.hpp"
#include "weakhyp/reduce.hpp"
#include "weakhyp/scenario.hpp"

namespace py = pybind11;
using namespace weakhyp;

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "weakly hyperbolic system analysis pipeline";

  py::register_exception<SingularPointError>(mod, "SingularPointError");
  py::register_exception<HyperbolicityError>(mod, "HyperbolicityError");
  py::register_exception<InadmissibleOrder>(mod, "InadmissibleOrder");
  py::register_exception<WeightInfeasible>(mod, "WeightInfeasible");

  mod.def("eval_expr", [](const std::string& text, double t) {
    return parse_coeff_expr(text)->eval(t);
  });
  mod.def("eval_expr_derivative", [](const std::string& text, int order, double t) {
    return derivative(parse_coeff_expr(text), order)->eval(t);
  });

  py::class_<SystemSpec, std::shared_ptr<SystemSpec>>(mod, "SystemSpec")
      .def_property_readonly("m", &SystemSpec::m)
      .def_property_readonly("n", &SystemSpec::n)
      .def_property_readonly("T", &SystemSpec::T)
      .def_property_readonly("alpha", &SystemSpec::alpha);
  mod.def("parse_system",
          [](const std::string& text) { return std::make_shared<SystemSpec>(parse_system_spec(text)); });
  mod.def("system_to_text", [](const std::shared_ptr<SystemSpec>& s) { return system_spec_to_text(*s); });
  mod.def("eval_system", [](const std::shared_ptr<SystemSpec>& s, double t, const Eigen::VectorXd& xi) {
    return eval_system(*s, t, xi);
  });
  mod.def("char_poly", [](const Eigen::MatrixXd& A) { return char_poly(A); });

  py::class_<ReducedSystem>(mod, "ReducedSystem")
      .def_property_readonly("m", &ReducedSystem::m)
      .def_property_readonly("size", &ReducedSystem::size)
      .def("block_A", &ReducedSystem::block_A)
      .def("eval_A", &ReducedSystem::eval_A)
      .def("eval_L", &ReducedSystem::eval_L)
      .def("set_kink_nudge", &ReducedSystem::set_kink_nudge);
  mod.def("to_block_sylvester",
          [](const std::shared_ptr<SystemSpec>& s) { return to_block_sylvester(s); });

  py::class_<EigenField>(mod, "EigenField")
      .def_readonly("t", &EigenField::t)
      .def_readonly("lambda_", &EigenField::lambda)
      .def_readonly("bracket", &EigenField::bracket);
  mod.def("compute_eigenvalues",
          [](const std::shared_ptr<SystemSpec>& s, int nt, const Eigen::VectorXd& xi) {
            return compute_eigenvalues(*s, uniform_grid(s->T(), nt), xi);
          });
  mod.def("estimate_holder", &estimate_holder);

  py::class_<RegularizedEigenField>(mod, "RegularizedEigenField")
      .def_readonly("lam_eps", &RegularizedEigenField::lam_eps)
      .def_readonly("dlam_eps", &RegularizedEigenField::dlam_eps)
      .def_readonly("eps", &RegularizedEigenField::eps);
  mod.def("mollify", [](const EigenField& f, double eps, double alpha) {
    return mollify(f, MollifierSpec::canonical(), eps, alpha);
  });

  py::class_<EnergyQuantities>(mod, "EnergyQuantities")
      .def_readonly("q1", &EnergyQuantities::q1)
      .def_readonly("q2", &EnergyQuantities::q2)
      .def_readonly("q3", &EnergyQuantities::q3)
      .def_readonly("q4", &EnergyQuantities::q4);
  mod.def("energy_quantities", &energy_quantities);

  mod.def("gamma_exponent", &gamma_exponent);
  mod.def("gevrey_threshold", &gevrey_threshold);

  mod.def("threshold_rows", [](const std::vector<double>& alphas, const std::vector<int>& ms) {
    return threshold_table(alphas, ms).rows;
  });
  mod.def("builtin_scenarios", &builtin_scenario_names);
  mod.def("run_pipeline",
          [](const std::string& scenario, const std::string& out_dir,
             const std::vector<std::string>& stages, int jobs) -> py::tuple {
            PipelineOptions opt;
            opt.out_dir = out_dir;
            opt.stages = stages;
            opt.jobs = jobs;
            try {
              RunManifest m = run_pipeline(load_scenario(scenario), opt);
              return py::make_tuple(0, std::string(m.config_hash));
            } catch (const StageFailure& e) {
              return py::make_tuple(e.exit_code(), std::string(e.what()));
            }
          },
          py::arg("scenario"), py::arg("out_dir"), py::arg("stages") = std::vector<std::string>{},
          py::arg("jobs") = 1);
}
