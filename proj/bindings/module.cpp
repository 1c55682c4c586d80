#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <sstream>

#include "isingscan/adaptive.hpp"
#include "isingscan/detectors.hpp"
#include "isingscan/exact.hpp"
#include "isingscan/mean_field.hpp"
#include "isingscan/model.hpp"
#include "isingscan/plan_io.hpp"
#include "isingscan/risk.hpp"
#include "isingscan/samplers.hpp"
#include "isingscan/signal_classes.hpp"
#include "isingscan/susceptibility.hpp"

namespace py = pybind11;
using namespace isingscan;

namespace {

SpinConfiguration config_from_list(const std::vector<int>& spins) {
  SpinConfiguration x;
  x.spins.reserve(spins.size());
  for (int v : spins) {
    if (v != 1 && v != -1) throw std::invalid_argument("spins must be +-1");
    x.spins.push_back(static_cast<std::int8_t>(v));
  }
  return x;
}

std::vector<int> config_to_list(const SpinConfiguration& x) {
  return std::vector<int>(x.spins.begin(), x.spins.end());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Ising model scan-test simulation and detection toolkit";

  py::enum_<GraphKind>(m, "GraphKind")
      .value("complete", GraphKind::complete)
      .value("erdos_renyi", GraphKind::erdos_renyi)
      .value("random_regular", GraphKind::random_regular)
      .value("lattice", GraphKind::lattice);
  py::enum_<Bc>(m, "Bc").value("free", Bc::free).value("plus", Bc::plus);
  py::enum_<Branch>(m, "Branch")
      .value("none", Branch::none)
      .value("positive", Branch::positive)
      .value("negative", Branch::negative);
  py::enum_<Regime>(m, "Regime")
      .value("low_or_critical_beta", Regime::low_or_critical_beta)
      .value("high_beta_dependence", Regime::high_beta_dependence);
  py::enum_<InitialState>(m, "InitialState")
      .value("all_plus", InitialState::all_plus)
      .value("all_minus", InitialState::all_minus)
      .value("uniform_random", InitialState::uniform_random);

  py::class_<RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def_static("child", &RngStream::child, py::arg("master_seed"), py::arg("index"))
      .def("uniform", &RngStream::uniform)
      .def("normal", py::overload_cast<double, double>(&RngStream::normal), py::arg("mean"),
           py::arg("sd"));

  py::class_<CouplingGraph>(m, "CouplingGraph")
      .def_readonly("n_sites", &CouplingGraph::n_sites)
      .def_readonly("kind", &CouplingGraph::kind)
      .def_readonly("side", &CouplingGraph::side)
      .def_readonly("dim", &CouplingGraph::dim)
      .def_readonly("bc", &CouplingGraph::bc)
      .def_readonly("scale", &CouplingGraph::scale)
      .def("edge_count", &CouplingGraph::edge_count)
      .def("weight", &CouplingGraph::weight, py::arg("i"), py::arg("j"))
      .def("weight_inf_norm", &CouplingGraph::weight_inf_norm)
      .def("has_ghost", &CouplingGraph::has_ghost)
      .def("serialize",
           [](const CouplingGraph& g) {
             std::ostringstream out;
             serialize_graph(g, out);
             return out.str();
           })
      .def_static("parse", [](const std::string& text) {
        std::istringstream in(text);
        return parse_graph(in);
      });

  m.def("build_complete", &build_complete, py::arg("n"));
  m.def("build_erdos_renyi", &build_erdos_renyi, py::arg("n"), py::arg("p"), py::arg("rng"));
  m.def("build_random_regular", &build_random_regular, py::arg("n"), py::arg("degree"),
        py::arg("rng"));
  m.def("build_lattice", &build_lattice, py::arg("side"), py::arg("dim"),
        py::arg("bc") = Bc::free);

  py::class_<SignalSpec>(m, "SignalSpec")
      .def_static("zero", &SignalSpec::zero, py::arg("n_sites"))
      .def_static("uniform", &SignalSpec::uniform, py::arg("n_sites"), py::arg("support"),
                  py::arg("strength"))
      .def_static("from_values", &SignalSpec::from_values, py::arg("n_sites"),
                  py::arg("support"), py::arg("values"))
      .def_property_readonly("n_sites", &SignalSpec::n_sites)
      .def_property_readonly("support", &SignalSpec::support)
      .def_property_readonly("values", &SignalSpec::values)
      .def("sparsity", &SignalSpec::sparsity)
      .def("at", &SignalSpec::at, py::arg("site"))
      .def("dense", &SignalSpec::dense);

  py::class_<ModelSpec>(m, "ModelSpec")
      .def(py::init<CouplingGraph, double>(), py::arg("graph"), py::arg("beta"))
      .def(py::init<CouplingGraph, double, SignalSpec>(), py::arg("graph"), py::arg("beta"),
           py::arg("field"))
      .def_readonly("graph", &ModelSpec::graph)
      .def_readonly("beta", &ModelSpec::beta)
      .def_readonly("field", &ModelSpec::field)
      .def("n_sites", &ModelSpec::n_sites)
      .def("with_field", &ModelSpec::with_field, py::arg("field"));

  py::class_<SpinConfiguration>(m, "SpinConfiguration")
      .def(py::init(&config_from_list), py::arg("spins"))
      .def_static("all_plus", &SpinConfiguration::all_plus, py::arg("n"))
      .def_static("all_minus", &SpinConfiguration::all_minus, py::arg("n"))
      .def_property_readonly("spins", &config_to_list)
      .def("n_sites", &SpinConfiguration::n_sites)
      .def("total", &SpinConfiguration::total)
      .def("mean", &SpinConfiguration::mean);

  m.def("hamiltonian", &hamiltonian, py::arg("model"), py::arg("x"));
  m.def("local_field", &local_field, py::arg("model"), py::arg("x"), py::arg("site"));

  py::class_<ExactSummary>(m, "ExactSummary")
      .def_readonly("log_partition", &ExactSummary::log_partition)
      .def_readonly("means", &ExactSummary::means)
      .def_readonly("pmf", &ExactSummary::pmf)
      .def("cov_at", &ExactSummary::cov_at, py::arg("i"), py::arg("j"));
  m.def(
      "exact_summary",
      [](const ModelSpec& model, bool want_cov, bool want_pmf, int cap) {
        ExactOptions opts;
        opts.want_cov = want_cov;
        opts.want_pmf = want_pmf;
        opts.cap = cap;
        return exact_summary(model, opts);
      },
      py::arg("model"), py::arg("want_cov") = true, py::arg("want_pmf") = false,
      py::arg("cap") = kExactDefaultCap);
  m.def(
      "exact_tail",
      [](const ModelSpec& model, const std::vector<int>& support, double t, int cap) {
        return exact_tail(model, support, t, cap);
      },
      py::arg("model"), py::arg("support"), py::arg("t"), py::arg("cap") = kExactDefaultCap);
  m.def("exact_ratio", &exact_ratio, py::arg("model_with_field"), py::arg("model_null"),
        py::arg("cap") = kExactDefaultCap);
  m.def("auxiliary_ratio_integral", &auxiliary_ratio_integral, py::arg("n"), py::arg("beta"),
        py::arg("s"), py::arg("strength"), py::arg("rel_tol") = 1e-8);
  m.def("magnetization_pmf", &magnetization_pmf, py::arg("model"),
        py::arg("cap") = kExactDefaultCap);
  m.def(
      "run_oracle_invariant_suite",
      [](int max_n, int instances, std::uint64_t seed) {
        const OracleCheckReport report = run_oracle_invariant_suite(max_n, instances, seed);
        return py::make_tuple(report.instances, report.failures, report.messages);
      },
      py::arg("max_n") = 8, py::arg("instances") = 50, py::arg("seed") = 0);

  py::class_<MeanFieldSolution>(m, "MeanFieldSolution")
      .def_readonly("beta", &MeanFieldSolution::beta)
      .def_readonly("m", &MeanFieldSolution::m)
      .def_readonly("residual", &MeanFieldSolution::residual);
  m.def("solve_m", &solve_m, py::arg("beta"));
  m.def("sharp_constant", &sharp_constant, py::arg("beta"));
  m.def(
      "scan_cutoff",
      [](double delta, double log_class_size, long s, bool low_regime, double beta) {
        CutoffSpec spec;
        spec.delta = delta;
        spec.log_class_size = log_class_size;
        spec.s = s;
        spec.regime = low_regime ? CutoffRegime::low : CutoffRegime::high_or_critical;
        const ScanCutoff cut = scan_cutoff(spec, beta);
        return py::make_tuple(cut.shift, cut.offset);
      },
      py::arg("delta"), py::arg("log_class_size"), py::arg("s") = 0,
      py::arg("low_regime") = false, py::arg("beta") = 0.0);
  m.def(
      "signal_strength_for_constant",
      [](double c, long s, double log_class_size, double beta, const std::string& family,
         double chi) {
        return signal_strength_for_constant(
            c, s, log_class_size, beta,
            family == "lattice" ? ThresholdFamily::lattice : ThresholdFamily::mean_field, chi);
      },
      py::arg("c"), py::arg("s"), py::arg("log_class_size"), py::arg("beta"),
      py::arg("family") = "mean_field", py::arg("chi") = 1.0);

  py::class_<ScanClass>(m, "ScanClass")
      .def_static(
          "from_sets",
          [](int n_sites, std::vector<std::vector<int>> sets) {
            return ScanClass::from_sets(n_sites, std::move(sets));
          },
          py::arg("n_sites"), py::arg("sets"))
      .def("size", &ScanClass::size)
      .def("s", &ScanClass::s)
      .def("n_sites", &ScanClass::n_sites)
      .def("candidate", &ScanClass::candidate, py::arg("k"))
      .def("rectangular", &ScanClass::rectangular)
      .def("serialize", [](const ScanClass& cls) {
        std::ostringstream out;
        serialize_class(cls, out);
        return out.str();
      });
  m.def(
      "gamma_distance",
      [](std::vector<int> a, std::vector<int> b) {
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        return gamma_distance(a, b);
      },
      py::arg("s1"), py::arg("s2"));
  m.def("greedy_cover", &greedy_cover, py::arg("cls"), py::arg("eps"));
  m.def("build_rectangle_class", &build_rectangle_class, py::arg("n_sites"), py::arg("dim"),
        py::arg("s"));
  m.def(
      "build_scan_grid",
      [](int n_sites, int dim, int s, double eta) {
        RectangleGridParams params;
        params.n_sites = n_sites;
        params.dim = dim;
        params.s = s;
        params.eta = eta;
        return build_scan_grid(params);
      },
      py::arg("n_sites"), py::arg("dim"), py::arg("s"), py::arg("eta") = 0.5);
  m.def("build_disjoint_class", &build_disjoint_class, py::arg("n_sites"), py::arg("dim"),
        py::arg("s"));
  m.def("make_disjoint_blocks", &make_disjoint_blocks, py::arg("n_sites"), py::arg("s"),
        py::arg("count"));
  m.def("default_eta", &default_eta, py::arg("n_sites"), py::arg("s"));
  m.def("default_cover_epsilon", &default_cover_epsilon, py::arg("n_sites"));
  m.def(
      "apply_signal",
      [](const std::vector<int>& support, double strength, int n_sites) {
        return apply_signal(support, strength, n_sites);
      },
      py::arg("support"), py::arg("strength"), py::arg("n_sites"));

  py::class_<ChainConfig>(m, "ChainConfig")
      .def(py::init<>())
      .def_static("glauber_defaults", &ChainConfig::glauber_defaults, py::arg("seed"))
      .def_static("swendsen_wang_defaults", &ChainConfig::swendsen_wang_defaults,
                  py::arg("seed"))
      .def_readwrite("burn_in_sweeps", &ChainConfig::burn_in_sweeps)
      .def_readwrite("thinning_sweeps", &ChainConfig::thinning_sweeps)
      .def_readwrite("initial_state", &ChainConfig::initial_state)
      .def_readwrite("seed", &ChainConfig::seed);
  m.def("glauber_sample", &glauber_sample, py::arg("model"), py::arg("chain"),
        py::arg("count"));
  m.def("swendsen_wang_sample", &swendsen_wang_sample, py::arg("model"), py::arg("chain"),
        py::arg("count"));
  py::class_<CurieWeissExactSampler>(m, "CurieWeissExactSampler")
      .def(py::init<int, double, const SignalSpec&>(), py::arg("n"), py::arg("beta"),
           py::arg("field"))
      .def("draw", &CurieWeissExactSampler::draw, py::arg("rng"))
      .def("draw_w", &CurieWeissExactSampler::draw_w, py::arg("rng"));
  m.def("curie_weiss_exact_sample", &curie_weiss_exact_sample, py::arg("n"), py::arg("beta"),
        py::arg("field"), py::arg("rng"));
  m.def(
      "fk_ising_bond_sample",
      [](const ModelSpec& model, const SpinConfiguration& x, RngStream& rng) {
        const BondConfiguration bonds = fk_ising_bond_sample(model, x, rng);
        return std::vector<int>(bonds.open.begin(), bonds.open.end());
      },
      py::arg("model"), py::arg("x"), py::arg("rng"));

  py::class_<ScanStatistics>(m, "ScanStatistics")
      .def_readonly("per_candidate", &ScanStatistics::per_candidate)
      .def_readonly("z_max", &ScanStatistics::z_max)
      .def_readonly("argmax", &ScanStatistics::argmax);
  m.def(
      "scan_statistics",
      [](const SpinConfiguration& x, const ScanClass& cls,
         const std::vector<double>& centering) { return scan_statistics(x, cls, centering); },
      py::arg("x"), py::arg("cls"), py::arg("centering") = std::vector<double>{});
  py::class_<TestDecision>(m, "TestDecision")
      .def_readonly("reject", &TestDecision::reject)
      .def_readonly("statistic", &TestDecision::statistic)
      .def_readonly("threshold", &TestDecision::threshold)
      .def_readonly("w", &TestDecision::w)
      .def_readonly("branch", &TestDecision::branch)
      .def_readonly("test_name", &TestDecision::test_name);
  m.def("high_temp_scan_test",
        py::overload_cast<const SpinConfiguration&, const ScanClass&, double>(
            &high_temp_scan_test),
        py::arg("x"), py::arg("cls"), py::arg("delta") = 0.2);
  m.def("low_temp_randomized_scan_test", &low_temp_randomized_scan_test, py::arg("x"),
        py::arg("cls"), py::arg("beta"), py::arg("delta"), py::arg("rng"));
  m.def(
      "lattice_scan_test",
      [](const SpinConfiguration& x, const ScanClass& cls, double chi, double delta,
         const std::vector<double>& centering) {
        return lattice_scan_test(x, cls, chi, delta, centering);
      },
      py::arg("x"), py::arg("cls"), py::arg("chi"), py::arg("delta") = 0.2,
      py::arg("centering") = std::vector<double>{});
  m.def("centered_sum_test", &centered_sum_test, py::arg("x"), py::arg("beta"),
        py::arg("threshold_multiplier") = 3.0);
  m.def("bonferroni_combine", &bonferroni_combine, py::arg("d1"), py::arg("d2"));

  py::class_<SusceptibilityEstimate>(m, "SusceptibilityEstimate")
      .def_readonly("beta", &SusceptibilityEstimate::beta)
      .def_readonly("chi_hat", &SusceptibilityEstimate::chi_hat)
      .def_readonly("std_error", &SusceptibilityEstimate::std_error)
      .def_readonly("block_size", &SusceptibilityEstimate::block_size)
      .def_readonly("interior_margin", &SusceptibilityEstimate::interior_margin)
      .def_readonly("replications", &SusceptibilityEstimate::replications);
  m.def(
      "estimate_chi",
      [](const ModelSpec& model, int s, const ChainConfig& chain, int replications,
         std::optional<int> margin, int threads) {
        return estimate_chi(model, s, chain, replications, margin, nullptr, threads);
      },
      py::arg("model"), py::arg("s"), py::arg("chain"), py::arg("replications"),
      py::arg("margin") = std::nullopt, py::arg("threads") = 0);
  m.def(
      "chi_monotonicity_sweep",
      [](int side, int dim, Bc bc, const std::vector<double>& betas, int s,
         const ChainConfig& chain, int replications, std::optional<int> margin, int threads) {
        const auto rows = chi_monotonicity_sweep(side, dim, bc, betas, s, chain, replications,
                                                 margin, threads);
        py::list out;
        for (const auto& row : rows)
          out.append(py::make_tuple(row.estimate.beta, row.estimate.chi_hat,
                                    row.estimate.std_error, row.monotonicity_violation));
        return out;
      },
      py::arg("side"), py::arg("dim"), py::arg("bc"), py::arg("betas"), py::arg("s"),
      py::arg("chain"), py::arg("replications"), py::arg("margin") = std::nullopt,
      py::arg("threads") = 0);
  py::class_<ChiTable>(m, "ChiTable")
      .def(py::init<std::vector<std::pair<double, double>>>(), py::arg("knots"))
      .def("at", &ChiTable::at, py::arg("beta"));
  m.attr("BETA_C_2D") = kBetaC2;

  m.def("regime_classifier", &regime_classifier, py::arg("x"));
  py::class_<PseudoLikelihoodFit>(m, "PseudoLikelihoodFit")
      .def_readonly("beta_hat", &PseudoLikelihoodFit::beta_hat)
      .def_readonly("residual", &PseudoLikelihoodFit::residual)
      .def_readonly("mean_sq_local_field", &PseudoLikelihoodFit::mean_sq_local_field)
      .def_readonly("clamped_low", &PseudoLikelihoodFit::clamped_low)
      .def_readonly("clamped_high", &PseudoLikelihoodFit::clamped_high);
  m.def("fit_beta_pseudolikelihood", &fit_beta_pseudolikelihood, py::arg("x"),
        py::arg("graph"));
  m.def("pseudolikelihood_score", &pseudolikelihood_score, py::arg("x"), py::arg("graph"),
        py::arg("beta"));
  py::class_<AdaptiveResult>(m, "AdaptiveResult")
      .def_readonly("decision", &AdaptiveResult::decision)
      .def_readonly("regime", &AdaptiveResult::regime)
      .def_readonly("chi_used", &AdaptiveResult::chi_used)
      .def_readonly("near_critical", &AdaptiveResult::near_critical)
      .def_property_readonly("beta_hat", [](const AdaptiveResult& r) -> py::object {
        if (r.fit) return py::cast(r.fit->beta_hat);
        return py::none();
      });
  m.def(
      "adaptive_test_mean_field",
      [](const SpinConfiguration& x, const ScanClass& cls, const CouplingGraph& graph,
         RngStream& rng, double delta, const std::string& branch) {
        AdaptiveMeanFieldOptions opts;
        opts.delta = delta;
        if (branch == "force_low") opts.branch = BranchOverride::force_low;
        else if (branch == "force_high") opts.branch = BranchOverride::force_high;
        else if (branch != "auto") throw std::invalid_argument("branch: auto|force_low|force_high");
        return adaptive_test_mean_field(x, cls, graph, rng, opts);
      },
      py::arg("x"), py::arg("cls"), py::arg("graph"), py::arg("rng"), py::arg("delta") = 0.2,
      py::arg("branch") = "auto");
  m.def(
      "adaptive_test_lattice",
      [](const SpinConfiguration& x, const ScanClass& cls, const CouplingGraph& graph,
         const ChiTable& table, double delta, double beta_c, double guard_margin,
         int pin_count, const std::vector<double>& centering) {
        AdaptiveLatticeOptions opts;
        opts.delta = delta;
        opts.beta_c = beta_c;
        opts.guard_margin = guard_margin;
        opts.pin_count = pin_count;
        opts.centering = centering;
        return adaptive_test_lattice(x, cls, graph, table, opts);
      },
      py::arg("x"), py::arg("cls"), py::arg("graph"), py::arg("chi_table"),
      py::arg("delta") = 0.2, py::arg("beta_c") = kBetaC2, py::arg("guard_margin") = 0.05,
      py::arg("pin_count") = 0, py::arg("centering") = std::vector<double>{});

  // risk harness through plan-file text
  m.def(
      "sweep_csv_from_plan",
      [](const std::string& plan_text, std::uint64_t seed, int threads) {
        std::istringstream in(plan_text);
        BuiltExperiment built = build_experiment(PlanConfig::parse(in), seed, threads);
        std::vector<double> betas = built.sweep_betas;
        if (betas.empty()) betas = {built.plan.null_model.beta};
        const ChiTable* table =
            built.plan.chi_table.empty() ? nullptr : &built.plan.chi_table;
        std::ostringstream out;
        write_sweep_csv(sweep_phase_diagram(built.plan, betas, table), out);
        return out.str();
      },
      py::arg("plan_text"), py::arg("seed"), py::arg("threads") = 0,
      "Run the sweep described by a plan-file string; returns the CSV text.");
  m.def(
      "run_risk_from_plan",
      [](const std::string& plan_text, std::uint64_t seed, int threads) {
        std::istringstream in(plan_text);
        BuiltExperiment built = build_experiment(PlanConfig::parse(in), seed, threads);
        const RiskReport report = run_risk(built.plan);
        py::list rows;
        for (const auto& point : report.points) {
          py::dict row;
          row["c"] = point.c;
          row["A"] = point.A;
          row["type1"] = point.type1.estimate;
          row["type2"] = point.type2_worst.estimate;
          row["risk"] = point.risk;
          row["failed"] = point.failed;
          rows.append(row);
        }
        return rows;
      },
      py::arg("plan_text"), py::arg("seed"), py::arg("threads") = 0);
}
