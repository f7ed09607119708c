#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fermilt/checkpoint.hpp"
#include "fermilt/errors.hpp"
#include "fermilt/experiments.hpp"
#include "fermilt/functionals.hpp"
#include "fermilt/state.hpp"

namespace py = pybind11;
using namespace fermilt;

namespace {

// pybind11 holders must be non-const; library interfaces use
// shared_ptr<const SpectralGrid>, so cast at the boundary.
using PyGrid = std::shared_ptr<SpectralGrid>;

PyGrid unconst(const GridPtr& g) {
  return std::const_pointer_cast<SpectralGrid>(g);
}

py::array_t<std::complex<double>> orbital_array(const OrbitalSet& set, int j) {
  if (j < 0 || j >= set.count()) throw ConfigError("orbital index out of range");
  const auto& g = *set.grid();
  const int n = g.n();
  py::array_t<std::complex<double>> out({n, n, n});
  auto buf = out.mutable_unchecked<3>();
  for (int ix = 0; ix < n; ++ix) {
    for (int iy = 0; iy < n; ++iy) {
      for (int iz = 0; iz < n; ++iz) {
        buf(ix, iy, iz) = set.orbitals[j].values[g.index(ix, iy, iz)];
      }
    }
  }
  return out;
}

py::dict report_dict(const MinimizeReport& rep) {
  py::dict d;
  d["objective"] = rep.objective;
  d["grad_norm"] = rep.projected_grad_norm;
  d["iterations"] = rep.iterations;
  d["converged"] = rep.converged;
  d["multipliers"] = rep.multipliers;
  d["el_residuals"] = rep.el_residuals;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() =
      "Spectral solver for pseudo-relativistic density-operator ground "
      "states and dual Lieb-Thirring constants on a periodic box";

  py::register_exception<ConfigError>(mod, "ConfigError");
  py::register_exception<DivergingObjective>(mod, "DivergingObjective");
  py::register_exception<InsufficientRecords>(mod, "InsufficientRecords");

  py::class_<SpectralGrid, PyGrid>(mod, "Grid")
      .def_static(
          "make",
          [](int n, double L) { return unconst(SpectralGrid::make(n, L)); },
          py::arg("n"), py::arg("L"))
      .def_property_readonly("n", &SpectralGrid::n)
      .def_property_readonly("L", &SpectralGrid::box_length)
      .def_property_readonly("spacing", &SpectralGrid::spacing);

  py::class_<OrbitalSet>(mod, "OrbitalSet")
      .def_property_readonly("count", &OrbitalSet::count)
      .def("grid", [](const OrbitalSet& s) { return unconst(s.grid()); })
      .def("orbital", &orbital_array, py::arg("index"),
           "dense (n, n, n) complex array of one orbital");

  py::class_<MinimizeConfig>(mod, "MinimizeConfig")
      .def(py::init<>())
      .def_readwrite("max_iters", &MinimizeConfig::max_iters)
      .def_readwrite("grad_tol", &MinimizeConfig::grad_tol)
      .def_readwrite("seed", &MinimizeConfig::seed);

  mod.def("default_init", &default_init, py::arg("grid"), py::arg("N"));
  mod.def("perturbed_init", &perturbed_init, py::arg("grid"), py::arg("N"),
          py::arg("seed"), py::arg("amplitude") = 0.2);

  mod.def(
      "minimize_energy",
      [](const OrbitalSet& init, double a, double m, const MinimizeConfig& cfg) {
        MinimizeReport rep = minimize_energy(init, a, m, cfg);
        py::dict d = report_dict(rep);
        d["state"] = rep.final_set;
        return d;
      },
      py::arg("init"), py::arg("a"), py::arg("m"),
      py::arg("config") = MinimizeConfig{},
      "ground state of E_a(N) by projected gradient descent");

  mod.def(
      "minimize_quotient",
      [](const OrbitalSet& init, const MinimizeConfig& cfg) {
        MinimizeReport rep = minimize_quotient(init, cfg);
        py::dict d = report_dict(rep);
        d["state"] = rep.final_set;
        return d;
      },
      py::arg("init"), py::arg("config") = MinimizeConfig{},
      "massless Lieb-Thirring quotient minimization");

  mod.def(
      "energy",
      [](const OrbitalSet& set, double a, double m) {
        const EnergyBreakdown e = energy(set, a, m);
        py::dict d;
        d["kinetic"] = e.kinetic_massive;
        d["interaction"] = e.interaction;
        d["total"] = e.total;
        return d;
      },
      py::arg("state"), py::arg("a"), py::arg("m"));

  mod.def(
      "quotient",
      [](const OrbitalSet& set) {
        const QuotientReport q = lt_quotient(set);
        py::dict d;
        d["massless_kinetic"] = q.massless_kinetic;
        d["lp_interaction"] = q.lp_interaction;
        d["quotient"] = q.quotient;
        return d;
      },
      py::arg("state"));

  mod.def("density",
          [](const OrbitalSet& set) {
            const RealField rho = density(set);
            const auto& g = *set.grid();
            const int n = g.n();
            py::array_t<double> out({n, n, n});
            auto buf = out.mutable_unchecked<3>();
            for (int ix = 0; ix < n; ++ix) {
              for (int iy = 0; iy < n; ++iy) {
                for (int iz = 0; iz < n; ++iz) {
                  buf(ix, iy, iz) = rho.values[g.index(ix, iy, iz)];
                }
              }
            }
            return out;
          },
          py::arg("state"));

  mod.def(
      "estimate_constant",
      [](int N, const GridPtr& grid, const MinimizeConfig& cfg, int starts,
         bool refine) {
        const EstimateDResult r = estimate_D(N, grid, cfg, starts, refine);
        py::dict d;
        d["value"] = r.value;
        d["spread"] = r.spread;
        d["doubling_delta"] = r.grid_doubling_delta;
        d["seed_values"] = r.seed_values;
        d["converged"] = r.converged;
        d["optimizer"] = r.optimizer;
        return d;
      },
      py::arg("N"), py::arg("grid"), py::arg("config") = MinimizeConfig{},
      py::arg("starts") = 3, py::arg("refine") = false,
      "multi-start estimate of the dual Lieb-Thirring constant D_{4/3,N}");

  mod.def(
      "estimate_dstar",
      [](const std::vector<OrbitalSet>& opts) {
        const DstarResult r = estimate_dstar(opts);
        py::dict d;
        d["value"] = r.value;
        d["dc_bias"] = r.dc_bias;
        return d;
      },
      py::arg("optimizers"));

  mod.def(
      "binding_check",
      [](double a, double m, const GridPtr& grid, const MinimizeConfig& cfg) {
        const BindingResult b = binding_check(a, m, grid, cfg);
        py::dict d;
        d["E1"] = b.E1;
        d["E2"] = b.E2;
        d["margin"] = b.margin;
        d["strict"] = b.strict;
        d["converged"] = b.converged;
        return d;
      },
      py::arg("a"), py::arg("m"), py::arg("grid"),
      py::arg("config") = MinimizeConfig{});

  mod.def(
      "sweep",
      [](const std::vector<double>& ratios, double m, double D2,
         const GridPtr& grid, const MinimizeConfig& solver, double dstar_guess,
         const std::string& csv_path) {
        SweepConfig cfg;
        cfg.solver = solver;
        cfg.dstar_guess = dstar_guess;
        cfg.csv_path = csv_path;
        auto recs = sweep_a(ratios, m, D2, grid, cfg);
        py::list out;
        for (const auto& r : recs) {
          py::dict d;
          d["a"] = r.a;
          d["E"] = r.E;
          d["eps"] = r.eps;
          d["mu1"] = r.mu1;
          d["mu2"] = r.mu2;
          d["converged"] = r.converged;
          d["frame_scale"] = r.frame_scale;
          out.append(d);
        }
        return out;
      },
      py::arg("ratios"), py::arg("m"), py::arg("D2"), py::arg("grid"),
      py::arg("config") = MinimizeConfig{}, py::arg("dstar_guess") = 5.0,
      py::arg("csv_path") = std::string{},
      "ground-state sweep a = ratio * D2 toward the blow-up threshold");

  mod.def("write_checkpoint", &write_checkpoint, py::arg("path"),
          py::arg("state"));
  mod.def("read_checkpoint", &read_checkpoint, py::arg("path"));
}
