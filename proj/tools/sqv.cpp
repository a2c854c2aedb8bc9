// sqv: verify that diagrammatic amplitudes of a Euclidean scalar theory
// agree between the covariance-contraction route and the relaxation-diagram
// route, enumerate the combinatorial structures involved, and sample the
// gradient-flow dynamic directly.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include "sqv/langevin.hpp"
#include "sqv/report.hpp"
#include "sqv/stochastic.hpp"
#include "sqv/trees.hpp"

using namespace sqv;

namespace {

int log_level() {
  const char* env = std::getenv("SQV_LOG");
  return env ? std::atoi(env) : 0;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "[sqv] " << msg << "\n";
}

struct CommonArgs {
  std::string format = "table";
  unsigned jobs = std::thread::hardware_concurrency();
};

bool records_mode(const CommonArgs& c) { return c.format == "records"; }

int run_enumerate_maps(int n, std::vector<int> degrees, int p, bool connected, int max_darts,
                       const CommonArgs& common) {
  EnumerateOptions opts;
  opts.connected_only = connected;
  opts.max_darts = max_darts;
  opts.jobs = common.jobs;
  auto maps = enumerate_maps(n, degrees, p, opts);
  auto groups = group_by_abstract_graph(maps);

  if (records_mode(common)) {
    for (const auto& [sig, members] : groups) {
      Record rec{{"abstract", members.front()->key.hex()},
                 {"embeddings", std::to_string(members.size())},
                 {"labeled_multiplicity", std::to_string(members.front()->multiplicity)}};
      std::cout << format_record(rec) << "\n";
    }
  } else {
    std::cout << maps.size() << " unlabeled maps in " << groups.size()
              << " abstract classes (order " << p << ", " << n << " external)\n";
    for (const auto& [sig, members] : groups) {
      std::cout << "  class x" << members.size() << "  multiplicity "
                << members.front()->multiplicity << "  rep " << to_text(members.front()->map)
                << "\n";
    }
  }
  return 0;
}

int run_enumerate_trees(const std::string& kind, int p, int q, const CommonArgs& common) {
  Record rec;
  if (kind == "recursive") {
    rec = {{"kind", kind}, {"vertices", std::to_string(p)},
           {"count", std::to_string(enumerate_recursive_trees(p).size())}};
  } else if (kind == "plane") {
    rec = {{"kind", kind}, {"edges", std::to_string(p)},
           {"count", std::to_string(enumerate_plane_trees(p).size())}};
  } else if (kind == "qary") {
    rec = {{"kind", kind}, {"q", std::to_string(q)}, {"internal", std::to_string(p)},
           {"count", std::to_string(enumerate_qary_trees(q, p).size())}};
  } else {
    std::cerr << "unknown tree kind '" << kind << "'\n";
    return 2;
  }
  if (records_mode(common))
    std::cout << format_record(rec) << "\n";
  else
    std::cout << rec.back().second << "\n";
  return 0;
}

void print_amplitude_table(const AmplitudeReport& r, bool verbose_forests) {
  std::cout << "map " << r.map_key.hex() << "  order " << r.order << "  feynman "
            << format_double(r.feynman_value) << "  forests " << r.forest_values.size()
            << "  sum " << format_double(r.forest_sum) << "  rel "
            << format_double(r.rel_discrepancy) << (r.pass ? "  pass" : "  FAIL") << "\n";
  if (verbose_forests)
    for (const auto& [id, v] : r.forest_values)
      std::cout << "    forest [" << id << "] = " << format_double(v) << "\n";
}

int run_amplitude(const std::string& map_text, const std::string& map_file,
                  const std::string& theory_file, const std::string& method_name,
                  const CommonArgs& common) {
  std::string text = map_text;
  if (!map_file.empty()) {
    std::ifstream in(map_file);
    if (!in) {
      std::cerr << "cannot open map file '" << map_file << "'\n";
      return 2;
    }
    std::getline(in, text);
  }
  CombinatorialMap map = from_text(text);
  Theory theory = load_theory_file(theory_file);
  AmplitudeMethod method =
      method_name == "quadrature" ? AmplitudeMethod::Quadrature : AmplitudeMethod::ClosedForm;
  AmplitudeReport r = verify_forest_sum(map, theory, method);
  if (records_mode(common))
    std::cout << format_record(amplitude_record(r)) << "\n";
  else
    print_amplitude_table(r, true);
  return r.pass ? 0 : 1;
}

int run_verify(const std::string& theory_file, int n, int order, const std::string& method_name,
               const CommonArgs& common) {
  Theory theory = load_theory_file(theory_file);
  if (n >= 0 && n != theory.n_external()) {
    std::cerr << "--n " << n << " disagrees with the theory's externals ("
              << theory.n_external() << ")\n";
    return 2;
  }
  AmplitudeMethod method =
      method_name == "quadrature" ? AmplitudeMethod::Quadrature : AmplitudeMethod::ClosedForm;
  log_info("verifying order " + std::to_string(order) + " with method " + to_string(method));
  OrderReport report = verify_order(theory, order, method, {}, {}, common.jobs);

  if (records_mode(common)) {
    for (const auto& r : report.reports) std::cout << format_record(amplitude_record(r)) << "\n";
    Record summary{{"check", "order_summary"},
                   {"order", std::to_string(report.order)},
                   {"maps", std::to_string(report.reports.size())},
                   {"worst_rel", format_double(report.worst_rel_discrepancy)},
                   {"moment_consistent", report.moment_consistent ? "1" : "0"},
                   {"pass", report.all_pass ? "1" : "0"}};
    std::cout << format_record(summary) << "\n";
  } else {
    for (const auto& r : report.reports) print_amplitude_table(r, false);
    std::cout << report.reports.size() << " map checks at order " << report.order
              << ", worst rel discrepancy " << format_double(report.worst_rel_discrepancy)
              << ", moment check " << (report.moment_consistent ? "ok" : "FAIL") << ", "
              << (report.all_pass ? "all pass" : "FAILURES") << "\n";
  }
  return report.all_pass && report.moment_consistent ? 0 : 1;
}

int run_simulate(const std::string& theory_file, double h, std::int64_t steps,
                 std::int64_t burn_in, std::int64_t thin, std::uint64_t seed, int chains,
                 std::vector<std::string> monomials, const std::string& dump,
                 const CommonArgs& common) {
  Theory theory = load_theory_file(theory_file);
  SimConfig cfg;
  cfg.step = h;
  cfg.samples = steps;
  cfg.burn_in = burn_in;
  cfg.thin = thin;
  cfg.seed = seed;

  std::vector<std::vector<int>> tuples;
  if (monomials.empty()) {
    for (int i = 0; i < theory.n_sites(); ++i)
      for (int j = i; j < theory.n_sites(); ++j) tuples.push_back({i, j});
    tuples.push_back(std::vector<int>(4, 0));
  } else {
    for (const auto& m : monomials) {
      std::vector<int> tuple;
      std::size_t pos = 0;
      while (pos < m.size()) {
        std::size_t comma = m.find(',', pos);
        if (comma == std::string::npos) comma = m.size();
        tuple.push_back(std::stoi(m.substr(pos, comma - pos)));
        pos = comma + 1;
      }
      tuples.push_back(tuple);
    }
  }

  if (!dump.empty()) {
    std::ofstream out;
    std::ostream* os = &std::cout;
    if (dump != "-") {
      out.open(dump);
      if (!out) {
        std::cerr << "cannot open dump file '" << dump << "'\n";
        return 2;
      }
      os = &out;
    }
    LangevinSimulator sim(theory, cfg);
    for (std::int64_t i = 0; i < cfg.burn_in; ++i) sim.step();
    for (std::int64_t s = 0; s < cfg.samples; ++s) {
      for (std::int64_t k = 0; k < cfg.thin; ++k) sim.step();
      *os << sim.step_index();
      for (int x = 0; x < theory.n_sites(); ++x) *os << " " << format_double(sim.state()(x));
      *os << "\n";
    }
    return 0;
  }

  auto estimates = equilibrium_moments_pooled(theory, cfg, tuples, chains, common.jobs);
  for (std::size_t m = 0; m < tuples.size(); ++m) {
    std::string sites;
    for (std::size_t i = 0; i < tuples[m].size(); ++i)
      sites += (i ? "," : "") + std::to_string(tuples[m][i]);
    if (records_mode(common)) {
      Record rec{{"monomial", sites},
                 {"value", format_double(estimates[m].value)},
                 {"std_error", format_double(estimates[m].std_error)},
                 {"n_effective", format_double(estimates[m].n_effective)}};
      std::cout << format_record(rec) << "\n";
    } else {
      std::cout << "<phi[" << sites << "]> = " << format_double(estimates[m].value) << " +- "
                << format_double(estimates[m].std_error)
                << "  (n_eff " << format_double(estimates[m].n_effective) << ")\n";
    }
  }
  return 0;
}

struct SelfCheck {
  std::string name;
  bool pass;
  std::string detail;
};

int run_selftest(const CommonArgs& common) {
  std::vector<SelfCheck> checks;
  auto add = [&](const std::string& name, bool pass, const std::string& detail = "") {
    checks.push_back({name, pass, detail});
    log_info(name + (pass ? " ok" : " FAILED"));
  };

  // enumeration multiplicities for the quartic two-point function
  {
    auto sizes_at = [&](int order) {
      EnumerateOptions connected;
      connected.connected_only = true;
      auto groups = group_by_abstract_graph(enumerate_maps(2, {4}, order, connected));
      std::vector<std::size_t> sizes;
      for (const auto& [sig, members] : groups) sizes.push_back(members.size());
      std::sort(sizes.begin(), sizes.end());
      return sizes;
    };
    add("embedding-counts-order-0", sizes_at(0) == std::vector<std::size_t>{1});
    add("embedding-counts-order-1", sizes_at(1) == std::vector<std::size_t>{3});
    add("embedding-counts-order-2", sizes_at(2) == std::vector<std::size_t>{6, 9, 9});
    add("embedding-counts-order-3",
        sizes_at(3) == std::vector<std::size_t>{18, 18, 18, 27, 27, 27, 27, 27, 54, 54});
  }

  // equal-time relaxation propagator equals the covariance
  {
    Matrix a(2, 2);
    a << 2, -1, -1, 2;
    Operator op = Operator::build(a);
    bool ok = true;
    for (double dt : {0.0, 0.5, 2.0}) {
      Matrix lhs = op.noise_propagator(dt, 0.0);
      Matrix rhs = op.heat_kernel(dt) * op.covariance();
      ok = ok && (lhs - rhs).cwiseAbs().maxCoeff() < 1e-10;
    }
    add("relaxation-propagator-product-form", ok);
  }

  // tadpole and three-edge two-loop values in zero dimensions
  {
    Theory t{Operator::build(Matrix::Identity(1, 1)), {VertexKernel::local(4, 1.0)}, {0, 0}};
    bool tad_ok = true;
    double tad_total = 0.0;
    for (const auto& em : enumerate_maps(2, {4}, 1)) {
      AmplitudeReport r = verify_forest_sum(em.map, t);
      tad_ok = tad_ok && r.pass && r.forest_values.size() == 2;
      for (const auto& [id, v] : r.forest_values) tad_ok = tad_ok && std::abs(v + 0.5) < 1e-12;
      tad_total += r.feynman_value;
    }
    add("tadpole-forest-values", tad_ok && std::abs(tad_total + 3.0) < 1e-12,
        "total " + format_double(tad_total));

    EnumerateOptions connected;
    connected.connected_only = true;
    double sunset_total = 0.0;
    int sunset_maps = 0;
    bool sunset_ok = true;
    for (const auto& em : enumerate_maps(2, {4}, 2, connected)) {
      auto edges = edge_list(em.map);
      // the two-vertex class with a triple internal edge
      VertexInfo info = vertex_info(em.map);
      int internal_internal = 0;
      for (auto [h, hp] : edges)
        if (info.vertex_of[h] != info.vertex_of[hp] && info.cycles[info.vertex_of[h]].size() > 1 &&
            info.cycles[info.vertex_of[hp]].size() > 1)
          ++internal_internal;
      if (internal_internal != 3) continue;
      ++sunset_maps;
      AmplitudeReport r = verify_forest_sum(em.map, t);
      sunset_ok = sunset_ok && r.pass;
      sunset_total += r.forest_sum;
    }
    add("sunset-forest-sum", sunset_ok && sunset_maps == 6 && std::abs(sunset_total - 6.0) < 1e-10,
        "maps " + std::to_string(sunset_maps) + " total " + format_double(sunset_total));
  }

  // tree combinatorics
  {
    bool counts_ok = enumerate_recursive_trees(5).size() == 24 &&
                     enumerate_plane_trees(4).size() == 14 && enumerate_qary_trees(3, 3).size() == 12;
    add("tree-counts", counts_ok);

    std::vector<std::vector<int>> shapes{{-1},       {-1, 0},       {-1, 0, 1},    {-1, 0, 0},
                                         {-1, 0, 1, 2}, {-1, 0, 1, 1}, {-1, 0, 1, 0}, {-1, 0, 0, 0}};
    std::vector<std::int64_t> alphas{1, 1, 1, 1, 1, 1, 3, 1};
    std::vector<Rational> volumes{{1, 1}, {1, 2}, {1, 6}, {1, 3}, {1, 24}, {1, 12}, {1, 8}, {1, 4}};
    bool shapes_ok = true;
    for (std::size_t i = 0; i < shapes.size(); ++i) {
      shapes_ok = shapes_ok && alpha_multiplicity(shapes[i]) == alphas[i];
      shapes_ok = shapes_ok && simplex_volume_coefficient(TreePoset{shapes[i]}) == volumes[i];
    }
    add("tree-multiplicities-and-volumes", shapes_ok);
  }

  bool all = true;
  for (const auto& c : checks) {
    all = all && c.pass;
    if (records_mode(common)) {
      Record rec{{"check", c.name}, {"pass", c.pass ? "1" : "0"}};
      if (!c.detail.empty()) rec.push_back({"detail", c.detail});
      std::cout << format_record(rec) << "\n";
    } else {
      std::cout << (c.pass ? "PASS " : "FAIL ") << c.name
                << (c.detail.empty() ? "" : "  (" + c.detail + ")") << "\n";
    }
  }
  if (!records_mode(common))
    std::cout << (all ? "selftest: all checks passed" : "selftest: FAILURES") << "\n";
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scalar-field amplitude verifier"};
  app.require_subcommand(1);

  CommonArgs common;

  // enumerate-maps
  int n_external = 2, order = 0, max_darts = 18;
  std::vector<int> degrees;
  bool connected = false;
  auto* cmd_maps = app.add_subcommand("enumerate-maps", "list unlabeled maps at an order");
  cmd_maps->add_option("--n", n_external, "number of external vertices");
  cmd_maps->add_option("--degree", degrees, "allowed internal vertex degree (repeatable)")
      ->required();
  cmd_maps->add_option("--p", order, "number of internal vertices")->required();
  cmd_maps->add_flag("--connected", connected, "keep connected maps only");
  cmd_maps->add_option("--max-darts", max_darts, "dart-count cap");
  cmd_maps->add_option("--format", common.format)->check(CLI::IsMember({"table", "records"}));
  cmd_maps->add_option("--jobs", common.jobs);

  // enumerate-trees
  std::string tree_kind = "recursive";
  int tree_p = 1, tree_q = 2;
  auto* cmd_trees = app.add_subcommand("enumerate-trees", "count tree families");
  cmd_trees->add_option("--kind", tree_kind)->check(CLI::IsMember({"recursive", "plane", "qary"}));
  cmd_trees->add_option("--p", tree_p, "vertices (recursive), edges (plane), internal nodes (qary)")
      ->required();
  cmd_trees->add_option("--q", tree_q, "branching factor for qary");
  cmd_trees->add_option("--format", common.format)->check(CLI::IsMember({"table", "records"}));

  // amplitude
  std::string map_text, map_file, theory_file, method_name = "closed";
  auto* cmd_amp = app.add_subcommand("amplitude", "check one map against its forest sum");
  cmd_amp->add_option("--map", map_text, "map in text form");
  cmd_amp->add_option("--map-file", map_file, "file holding the map text");
  cmd_amp->add_option("--theory", theory_file)->required();
  cmd_amp->add_option("--method", method_name)->check(CLI::IsMember({"closed", "quadrature"}));
  cmd_amp->add_option("--format", common.format)->check(CLI::IsMember({"table", "records"}));

  // verify (verify-order is the same check spelled explicitly)
  int verify_n = -1, verify_p = 1;
  auto* cmd_verify = app.add_subcommand("verify", "verify every map at an order");
  cmd_verify->add_option("--theory", theory_file)->required();
  cmd_verify->add_option("--n", verify_n, "expected number of externals (cross-checked)");
  cmd_verify->add_option("--order", verify_p)->required();
  cmd_verify->add_option("--method", method_name)->check(CLI::IsMember({"closed", "quadrature"}));
  cmd_verify->add_option("--format", common.format)->check(CLI::IsMember({"table", "records"}));
  cmd_verify->add_option("--jobs", common.jobs);
  auto* cmd_verify_order = app.add_subcommand("verify-order", "alias of verify");
  cmd_verify_order->add_option("--theory", theory_file)->required();
  cmd_verify_order->add_option("--n", verify_n);
  cmd_verify_order->add_option("--order", verify_p)->required();
  cmd_verify_order->add_option("--method", method_name)
      ->check(CLI::IsMember({"closed", "quadrature"}));
  cmd_verify_order->add_option("--format", common.format)
      ->check(CLI::IsMember({"table", "records"}));
  cmd_verify_order->add_option("--jobs", common.jobs);

  // simulate
  double h = 1e-3;
  std::int64_t steps = 100000, burn_in = 10000, thin = 1;
  std::uint64_t seed = 1;
  int chains = 1;
  std::vector<std::string> monomials;
  std::string dump;
  auto* cmd_sim = app.add_subcommand("simulate", "sample the gradient-flow dynamic");
  cmd_sim->add_option("--theory", theory_file)->required();
  cmd_sim->add_option("--step", h, "time increment per update");
  cmd_sim->add_option("--steps", steps, "recorded samples");
  cmd_sim->add_option("--burn-in", burn_in);
  cmd_sim->add_option("--thin", thin, "steps between samples");
  cmd_sim->add_option("--seed", seed);
  cmd_sim->add_option("--chains", chains, "independent chains pooled together");
  cmd_sim->add_option("--monomial", monomials, "site tuple like 0,1 (repeatable)");
  cmd_sim->add_option("--dump", dump, "write the sampled trajectory to a file ('-' = stdout)");
  cmd_sim->add_option("--format", common.format)->check(CLI::IsMember({"table", "records"}));
  cmd_sim->add_option("--jobs", common.jobs);

  // selftest
  auto* cmd_self = app.add_subcommand("selftest", "run the built-in golden checks");
  cmd_self->add_option("--format", common.format)->check(CLI::IsMember({"table", "records"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (cmd_maps->parsed())
      return run_enumerate_maps(n_external, degrees, order, connected, max_darts, common);
    if (cmd_trees->parsed()) return run_enumerate_trees(tree_kind, tree_p, tree_q, common);
    if (cmd_amp->parsed())
      return run_amplitude(map_text, map_file, theory_file, method_name, common);
    if (cmd_verify->parsed() || cmd_verify_order->parsed())
      return run_verify(theory_file, verify_n, verify_p, method_name, common);
    if (cmd_sim->parsed())
      return run_simulate(theory_file, h, steps, burn_in, thin, seed, chains, monomials, dump,
                          common);
    if (cmd_self->parsed()) return run_selftest(common);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
