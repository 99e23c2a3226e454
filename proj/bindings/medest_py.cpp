// Python surface for the scalar estimators, planners and samplers.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "medest/bounds.hpp"
#include "medest/distributions.hpp"
#include "medest/errors.hpp"
#include "medest/kernels.hpp"
#include "medest/mean_estimators.hpp"
#include "medest/numeric.hpp"
#include "medest/ustat_estimators.hpp"

namespace py = pybind11;
using namespace medest;

namespace {

Sample to_sample(std::vector<double> values) {
  return Sample(std::move(values));
}

BlockScheme block_scheme(const std::string& name) {
  if (name == "partition") return BlockScheme::Partition;
  if (name == "swor") return BlockScheme::SWoR;
  if (name == "mc") return BlockScheme::WithReplacement;
  throw std::invalid_argument("scheme must be partition, swor or mc");
}

PairScheme pair_scheme(const std::string& name) {
  if (name == "swor") return PairScheme::WithoutReplacement;
  if (name == "mc") return PairScheme::WithReplacement;
  throw std::invalid_argument("pair scheme must be swor or mc");
}

py::dict plan_dict(const EstimatorPlan& plan) {
  py::dict d;
  d["estimator"] = estimator_kind_name(plan.estimator);
  d["n"] = plan.n;
  d["delta"] = plan.delta;
  if (plan.tau) d["tau"] = *plan.tau;
  d["K"] = plan.K;
  d["B"] = plan.B;
  d["radius"] = plan.radius;
  return d;
}

py::dict mean_dict(const MeanEstimate& e) {
  py::dict d;
  d["value"] = e.value;
  d["block_values"] = e.block_values;
  d["K"] = e.K;
  d["B"] = e.B;
  return d;
}

py::dict pairwise_dict(const PairwiseEstimate& e) {
  py::dict d;
  d["value"] = e.value;
  d["block_values"] = e.block_values;
  d["K"] = e.K;
  d["B"] = e.B;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "median-based robust estimators for means and pairwise expectations";

  m.def("median", [](std::vector<double> values) { return median(std::move(values)); },
        py::arg("values"), "lower median (an order statistic, never an average)");

  m.def("complete_ustat",
        [](std::vector<double> values) {
          return complete_ustat(to_sample(std::move(values)), variance_kernel());
        },
        py::arg("values"), "variance-kernel U-statistic over all pairs");

  m.def("split_pairs_estimate",
        [](std::vector<double> values) {
          return split_pairs_estimate(to_sample(std::move(values)),
                                      variance_kernel());
        },
        py::arg("values"), "mean of h over floor(n/2) disjoint pairs");

  m.def("estimate_components",
        [](std::vector<double> values, std::size_t pair_cap) {
          const HoeffdingComponents c = estimate_components(
              to_sample(std::move(values)), variance_kernel(), pair_cap);
          py::dict d;
          d["theta"] = c.theta;
          d["sigma1_sq"] = c.sigma1_sq;
          d["sigma2_sq"] = c.sigma2_sq;
          d["sigma_sq"] = c.sigma_sq;
          return d;
        },
        py::arg("values"), py::arg("pair_cap") = 10000,
        "plug-in Hoeffding components of the variance kernel");

  m.def("mom",
        [](std::vector<double> values, std::size_t K, std::uint64_t seed) {
          return mean_dict(mom(to_sample(std::move(values)), K, RngSeed::root(seed)));
        },
        py::arg("values"), py::arg("K"), py::arg("seed"));

  m.def("morm",
        [](std::vector<double> values, std::size_t K, std::size_t B,
           const std::string& scheme, std::uint64_t seed) {
          return mean_dict(morm(to_sample(std::move(values)), K, B,
                                block_scheme(scheme), RngSeed::root(seed)));
        },
        py::arg("values"), py::arg("K"), py::arg("B"), py::arg("scheme") = "swor",
        py::arg("seed") = 0);

  m.def("mou",
        [](std::vector<double> values, std::size_t K, std::uint64_t seed) {
          return pairwise_dict(mou(to_sample(std::move(values)), variance_kernel(),
                                   K, RngSeed::root(seed)));
        },
        py::arg("values"), py::arg("K"), py::arg("seed") = 0);

  m.def("moru",
        [](std::vector<double> values, std::size_t K, std::size_t B,
           std::uint64_t seed) {
          return pairwise_dict(moru(to_sample(std::move(values)), variance_kernel(),
                                    K, B, RngSeed::root(seed)));
        },
        py::arg("values"), py::arg("K"), py::arg("B"), py::arg("seed") = 0);

  m.def("mom_split_pairs",
        [](std::vector<double> values, std::size_t K, std::uint64_t seed) {
          return pairwise_dict(mom_on_split_pairs(to_sample(std::move(values)),
                                                  variance_kernel(), K,
                                                  RngSeed::root(seed)));
        },
        py::arg("values"), py::arg("K"), py::arg("seed") = 0);

  m.def("moiu",
        [](std::vector<double> values, std::size_t K, std::size_t M,
           const std::string& scheme, std::uint64_t seed) {
          return pairwise_dict(moiu(to_sample(std::move(values)), variance_kernel(),
                                    K, M, pair_scheme(scheme), RngSeed::root(seed)));
        },
        py::arg("values"), py::arg("K"), py::arg("M"), py::arg("scheme") = "mc",
        py::arg("seed") = 0);

  m.def("plan_mom",
        [](std::size_t n, double delta, double sigma) {
          return plan_dict(plan_mom(n, delta, sigma));
        },
        py::arg("n"), py::arg("delta"), py::arg("sigma"));

  m.def("plan_morm",
        [](std::size_t n, double delta, double tau, double sigma,
           const std::string& scheme) {
          return plan_dict(plan_morm(n, delta, tau, sigma, block_scheme(scheme)));
        },
        py::arg("n"), py::arg("delta"), py::arg("tau"), py::arg("sigma"),
        py::arg("scheme") = "swor");

  m.def("plan_mou",
        [](std::size_t n, double delta, double sigma1_sq, double sigma2_sq) {
          return plan_dict(plan_mou(n, delta, sigma1_sq, sigma2_sq));
        },
        py::arg("n"), py::arg("delta"), py::arg("sigma1_sq"), py::arg("sigma2_sq"));

  m.def("plan_moru",
        [](std::size_t n, double delta, double tau, double sigma1_sq,
           double sigma2_sq) {
          return plan_dict(plan_moru(n, delta, tau, sigma1_sq, sigma2_sq));
        },
        py::arg("n"), py::arg("delta"), py::arg("tau"), py::arg("sigma1_sq"),
        py::arg("sigma2_sq"));

  m.def("plan_mom_split_pairs",
        [](std::size_t n, double delta, double sigma_h) {
          return plan_dict(plan_mom_split_pairs(n, delta, sigma_h));
        },
        py::arg("n"), py::arg("delta"), py::arg("sigma_h"));

  m.def("plan_moiu",
        [](std::size_t n, double delta, double tau, const std::string& scheme) {
          return plan_dict(plan_moiu(n, delta, tau, pair_scheme(scheme)));
        },
        py::arg("n"), py::arg("delta"), py::arg("tau"), py::arg("scheme") = "mc");

  m.def("draw",
        [](const std::string& law, std::size_t n, std::uint64_t seed) {
          Rng g = RngSeed::root(seed).stream();
          return medest::draw(LawSpec::by_name(law), n, g).flat();
        },
        py::arg("law"), py::arg("n"), py::arg("seed"),
        "n draws from normal, student3, lognormal or pareto3");

  py::register_exception<insufficient_data>(m, "InsufficientData",
                                            PyExc_ValueError);
  py::register_exception<infeasible_plan>(m, "InfeasiblePlan", PyExc_ValueError);
}
