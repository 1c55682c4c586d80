#include "isingscan/plan_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "isingscan/susceptibility.hpp"

namespace isingscan {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

PlanConfig PlanConfig::parse(std::istream& in) {
  PlanConfig cfg;
  std::string line, section;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("plan file: expected `key = value`, got: " + line);
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::runtime_error("plan file: empty key");
    if (!section.empty()) key = section + "." + key;
    cfg.entries_[key] = value;
  }
  return cfg;
}

PlanConfig PlanConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("plan file: cannot open " + path);
  return parse(in);
}

bool PlanConfig::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string PlanConfig::get(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) throw std::runtime_error("plan file: missing key " + key);
  return it->second;
}

std::string PlanConfig::get_or(const std::string& key, const std::string& fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double PlanConfig::get_double(const std::string& key) const { return std::stod(get(key)); }

double PlanConfig::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long PlanConfig::get_long(const std::string& key) const { return std::stol(get(key)); }

long PlanConfig::get_long_or(const std::string& key, long fallback) const {
  return has(key) ? get_long(key) : fallback;
}

std::vector<double> PlanConfig::get_doubles_or(const std::string& key) const {
  std::vector<double> out;
  if (!has(key)) return out;
  std::string raw = get(key);
  std::replace(raw.begin(), raw.end(), ',', ' ');
  std::istringstream ss(raw);
  double v;
  while (ss >> v) out.push_back(v);
  return out;
}

BuiltExperiment build_experiment(const PlanConfig& cfg, std::uint64_t master_seed,
                                 int threads) {
  BuiltExperiment built;
  ExperimentPlan& plan = built.plan;
  plan.master_seed = master_seed;
  plan.threads = threads;

  const std::string family = cfg.get("family");
  const double beta = cfg.get_double("beta");
  CouplingGraph graph;
  if (family == "curie_weiss") {
    graph = build_complete(static_cast<int>(cfg.get_long("n")));
  } else if (family == "lattice") {
    const int side = static_cast<int>(cfg.get_long("side"));
    const int dim = static_cast<int>(cfg.get_long_or("dim", 2));
    const Bc bc = cfg.get_or("bc", "free") == "plus" ? Bc::plus : Bc::free;
    graph = build_lattice(side, dim, bc);
  } else if (family == "erdos_renyi") {
    RngStream rng(static_cast<std::uint64_t>(cfg.get_long_or("graph_seed", 1)));
    graph = build_erdos_renyi(static_cast<int>(cfg.get_long("n")), cfg.get_double("p"), rng);
  } else if (family == "random_regular") {
    RngStream rng(static_cast<std::uint64_t>(cfg.get_long_or("graph_seed", 1)));
    graph = build_random_regular(static_cast<int>(cfg.get_long("n")),
                                 static_cast<int>(cfg.get_long("degree")), rng);
  } else {
    throw std::runtime_error("plan file: unknown family " + family);
  }
  plan.null_model = ModelSpec(graph, beta);

  const int n = plan.null_model.n_sites();
  const int s = static_cast<int>(cfg.get_long("s"));
  const std::string recipe = cfg.get_or("class", "disjoint_blocks");
  if (recipe == "disjoint_blocks") {
    const int blocks = static_cast<int>(cfg.get_long_or("blocks", n / s));
    plan.cls = make_disjoint_blocks(n, s, blocks);
  } else if (recipe == "intervals") {
    plan.cls = build_rectangle_class(n, 1, s);
  } else if (recipe == "rectangle_full") {
    plan.cls = build_rectangle_class(n, static_cast<int>(cfg.get_long_or("dim", 2)), s);
  } else if (recipe == "rectangle_grid") {
    RectangleGridParams params;
    params.n_sites = n;
    params.dim = static_cast<int>(cfg.get_long_or("dim", 2));
    params.s = s;
    params.eta = cfg.get_double_or("eta", default_eta(n, s));
    plan.cls = build_scan_grid(params);
  } else if (recipe == "disjoint_tiling") {
    plan.cls = build_disjoint_class(n, static_cast<int>(cfg.get_long_or("dim", 2)), s);
  } else {
    throw std::runtime_error("plan file: unknown class recipe " + recipe);
  }

  plan.test = parse_test_kind(cfg.get_or("test", "high_temp_scan"));
  plan.delta = cfg.get_double_or("delta", 0.2);
  plan.chi = cfg.get_double_or("chi", 1.0);
  plan.centered_sum_multiplier = cfg.get_double_or("centered_sum_multiplier", 3.0);
  plan.type1_reps = static_cast<int>(cfg.get_long_or("type1_reps", 500));
  plan.type2_reps = static_cast<int>(cfg.get_long_or("type2_reps", 200));

  const std::string sampler = cfg.get_or(
      "sampler", family == "curie_weiss" ? "cw_exact"
                                         : (family == "lattice" ? "swendsen_wang" : "glauber"));
  if (sampler == "cw_exact") plan.sampler = SamplerKind::cw_exact;
  else if (sampler == "glauber") plan.sampler = SamplerKind::glauber;
  else if (sampler == "swendsen_wang") plan.sampler = SamplerKind::swendsen_wang;
  else throw std::runtime_error("plan file: unknown sampler " + sampler);

  plan.chain = plan.sampler == SamplerKind::swendsen_wang
                   ? ChainConfig::swendsen_wang_defaults(0)
                   : ChainConfig::glauber_defaults(0);
  plan.chain.burn_in_sweeps =
      static_cast<int>(cfg.get_long_or("burn_in", plan.chain.burn_in_sweeps));
  plan.chain.thinning_sweeps =
      static_cast<int>(cfg.get_long_or("thinning", plan.chain.thinning_sweeps));

  // placements: `first`, or `first misaligned` for grid classes; lattice
  // rectangle families default to both to stress the covering guarantee
  const bool lattice_grid = family == "lattice" && plan.cls.rectangular();
  const std::string placements =
      cfg.get_or("placements", lattice_grid ? "first misaligned" : "first");
  std::istringstream ps(placements);
  std::string token;
  while (ps >> token) {
    if (token == "first") {
      plan.placements.push_back(plan.cls.candidate(0));
    } else if (token == "misaligned" && plan.cls.rectangular()) {
      // shift the first cube by half its side to stress the covering net
      const auto a0 = plan.cls.anchor(0);
      std::vector<int> shifted(a0);
      for (auto& v : shifted)
        v = std::min(v + plan.cls.cube_side() / 2, plan.cls.side() - plan.cls.cube_side());
      std::vector<int> sites;
      std::vector<int> offset(plan.cls.dim(), 0);
      while (true) {
        int idx = 0;
        for (int ax = 0; ax < plan.cls.dim(); ++ax)
          idx = idx * plan.cls.side() + (shifted[ax] + offset[ax]);
        sites.push_back(idx);
        int ax = plan.cls.dim() - 1;
        while (ax >= 0 && ++offset[ax] == plan.cls.cube_side()) offset[ax--] = 0;
        if (ax < 0) break;
      }
      std::sort(sites.begin(), sites.end());
      plan.placements.push_back(std::move(sites));
    } else {
      throw std::runtime_error("plan file: unknown placement " + token);
    }
  }

  // the unknown-beta lattice test needs a chi(beta) interpolation table;
  // lattice sweeps can request one too (chi_table_betas). Estimated here on
  // a seeded grid so reruns are identical.
  if (plan.test == TestKind::adaptive_lattice || cfg.has("chi_table_betas")) {
    if (family != "lattice")
      throw std::runtime_error("plan file: chi tables need a lattice plan");
    std::vector<double> knots = cfg.get_doubles_or("chi_table_betas");
    if (knots.empty()) {
      const double lo = std::max(0.05, beta - 0.15), hi = beta + 0.15;
      knots = {lo, 0.5 * (lo + hi), hi};
    }
    ChainConfig crun = ChainConfig::swendsen_wang_defaults(
        RngStream::child(master_seed, 0xc41ULL).next_u64());
    std::optional<int> margin;
    if (cfg.has("margin")) margin = static_cast<int>(cfg.get_long("margin"));
    plan.chi_table = build_chi_table(
        graph.side, graph.dim, graph.bc, knots, s, crun,
        static_cast<int>(cfg.get_long_or("chi_table_reps", 400)), threads, margin);
    // without an explicit chi the cutoff and signal calibration follow the table
    if (!cfg.has("chi")) plan.chi = plan.chi_table.at(beta);
  }

  // plus-bc lattice tests center Z_S by estimated per-site null means; the
  // estimation run is seeded off the master seed so reruns are identical
  const long centering_draws = cfg.get_long_or("centering_draws", 0);
  if (centering_draws > 0) {
    ChainConfig crun = ChainConfig::swendsen_wang_defaults(
        RngStream::child(master_seed, 0xcee0ULL).next_u64());
    crun.thinning_sweeps = 2;
    plan.centering =
        estimate_null_means(plan.null_model, static_cast<int>(centering_draws), crun);
  }

  built.sweep_betas = cfg.get_doubles_or("sweep.betas");
  const auto constants = cfg.get_doubles_or("sweep.constants");
  if (!constants.empty()) plan.constants = constants;
  else if (cfg.has("c")) plan.constants = {cfg.get_double("c")};
  return built;
}

}  // namespace isingscan
