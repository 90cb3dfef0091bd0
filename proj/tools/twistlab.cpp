// twistlab: batch experiment runner for centralizer diagnostics on finite
// Koethe lattices. Subcommands mirror the library surface: nabla, params,
// distance, psi, decompose, constants, suite.

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "twistlab/centralizers.hpp"
#include "twistlab/diagnostics.hpp"
#include "twistlab/measure.hpp"
#include "twistlab/norms.hpp"
#include "twistlab/report.hpp"
#include "twistlab/suite.hpp"

namespace {

using nlohmann::json;
using namespace twistlab;

struct Opts {
  std::string config_path;
  std::string out_dir = ".";
  bool plot = false;

  std::string space = "lp:2";
  std::string centralizer = "kp:lp:2";
  std::string grid = "2,4,8,16";
  std::size_t atoms = 0;
  std::uint64_t seed = 0;
  std::size_t mc_samples = 4096;
  std::size_t exact_cap = 20;
  double log_base = 2.718281828459045;
  int random_families = 8;
  int local_steps = 200;
  int rounds = 20;
  int budget = 8;
  std::string track = "kp";
  double p = 2.0;
  std::string couple = "lp:1;lp:inf";
  double theta = 0.5;
  int count = 10;
  std::string x_file;
  std::size_t samples = 10000;
};

std::vector<std::size_t> parse_grid(const std::string& text) {
  std::vector<std::size_t> out;
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const std::size_t lo = std::stoul(text.substr(0, dots));
    const std::size_t hi = std::stoul(text.substr(dots + 2));
    if (lo < 1 || hi < lo) throw std::invalid_argument("bad n-grid range");
    for (std::size_t n = lo; n <= hi; ++n) out.push_back(n);
    return out;
  }
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoul(tok));
  if (out.empty()) throw std::invalid_argument("empty n-grid");
  return out;
}

std::size_t thread_cap() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("TWISTLAB_THREADS"))
    n = std::max<std::size_t>(1, std::stoul(env));
  return n;
}

/// Row-parallel execution over the n-grid; results are written by index, so
/// output order is deterministic regardless of scheduling.
void parallel_rows(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min(count, thread_cap());
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (auto& t : pool) t.join();
}

/// Config-file merge: a flag given on the command line wins, otherwise the
/// config file value, otherwise the built-in default.
struct ConfigLayer {
  json file;
  CLI::App* cmd;

  template <class T>
  void apply(const std::string& flag, const std::string& key, T& value) const {
    if (cmd->count(flag) == 0 && file.contains(key)) value = file.at(key).get<T>();
  }
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read config file '" + path + "'");
  return json::parse(f);
}

std::string out_path(const std::string& dir, const std::string& name) {
  if (dir.empty() || dir == ".") return name;
  return dir + "/" + name;
}

DisjointFamily canonical_family(const SpacePtr& space, const NormPtr& norm, std::size_t n) {
  std::vector<KVec> members;
  for (std::size_t i = 0; i < n; ++i) {
    KVec u = KVec::unit(space, i);
    const double nu = (*norm)(u);
    members.push_back((1.0 / nu) * u);
  }
  return DisjointFamily(members, /*successive=*/true);
}

void emit(const Opts& o, const json& config, json results,
          const std::optional<Table>& table, const std::string& stem) {
  write_file(out_path(o.out_dir, "report.json"),
             make_report(config, std::move(results)).dump(2) + "\n");
  if (table) {
    write_file(out_path(o.out_dir, stem + ".csv"), to_csv(*table));
    if (o.plot) write_file(out_path(o.out_dir, stem + ".svg"), to_svg(*table, stem));
  }
}

int run_nabla(Opts& o, const ConfigLayer& layer) {
  layer.apply("--space", "space", o.space);
  layer.apply("--centralizer", "centralizer", o.centralizer);
  layer.apply("--n", "n", o.grid);
  layer.apply("--atoms", "atoms", o.atoms);
  layer.apply("--mc-samples", "mc_samples", o.mc_samples);
  layer.apply("--exact-cap", "exact_cap", o.exact_cap);
  layer.apply("--seed", "seed", o.seed);

  auto grid = parse_grid(o.grid);
  if (o.atoms == 0) o.atoms = *std::max_element(grid.begin(), grid.end());
  auto space = AtomSpace::counting(o.atoms);
  auto norm = parse_space(o.space);
  auto omega = parse_centralizer(o.centralizer);

  json config{{"subcommand", "nabla"},       {"space", o.space},
              {"centralizer", o.centralizer}, {"n", o.grid},
              {"atoms", o.atoms},            {"mc_samples", o.mc_samples},
              {"exact_cap", o.exact_cap},    {"seed", o.seed}};

  const bool kp_on_lp = omega->kind() == "kalton_peck" && norm->kind() == "lp";
  const double p = kp_on_lp ? std::dynamic_pointer_cast<const LpNorm>(norm)->p() : 0.0;
  const bool with_ref = kp_on_lp && p != kInfExponent;

  std::vector<json> rows(grid.size());
  std::vector<double> values(grid.size()), refs(grid.size());
  parallel_rows(grid.size(), [&](std::size_t i) {
    const std::size_t n = grid[i];
    json row{{"n", n}};
    try {
      NablaConfig cfg{o.exact_cap, o.mc_samples, o.seed};
      auto res = nabla(*omega, *norm, canonical_family(space, norm, n), std::nullopt, cfg);
      row["nabla"] = res.value;
      row["mode"] = res.exact ? "exact" : "monte_carlo";
      row["samples"] = res.samples;
      if (!res.exact) {
        row["seed"] = res.seed;
        row["stderr"] = res.stderr_estimate;
      }
      values[i] = res.value;
      if (with_ref) {
        refs[i] = (1.0 / p) * std::pow(static_cast<double>(n), 1.0 / p) *
                  std::log(static_cast<double>(n));
        row["kp_reference"] = refs[i];
      }
    } catch (const std::exception& e) {
      row["error"] = e.what();
      values[i] = refs[i] = std::nan("");
    }
    rows[i] = std::move(row);
  });

  Table t;
  t.x_label = "n";
  for (std::size_t n : grid) t.x.push_back(static_cast<double>(n));
  t.add_column("nabla", values);
  if (with_ref) t.add_column("kp_reference", refs);
  emit(o, config, json{{"rows", rows}}, t, "nabla");
  return 0;
}

int run_params(Opts& o, const ConfigLayer& layer) {
  layer.apply("--space", "space", o.space);
  layer.apply("--n", "n", o.grid);
  layer.apply("--atoms", "atoms", o.atoms);
  layer.apply("--seed", "seed", o.seed);
  layer.apply("--random-families", "random_families", o.random_families);
  layer.apply("--local-steps", "local_steps", o.local_steps);

  auto grid = parse_grid(o.grid);
  if (o.atoms == 0) o.atoms = 2 * *std::max_element(grid.begin(), grid.end());
  auto space = AtomSpace::counting(o.atoms);
  auto norm = parse_space(o.space);
  ParamStrategy strat{o.seed == 0 ? 7 : o.seed, o.random_families, o.local_steps};

  json config{{"subcommand", "params"},
              {"space", o.space},
              {"n", o.grid},
              {"atoms", o.atoms},
              {"seed", strat.seed},
              {"random_families", o.random_families},
              {"local_steps", o.local_steps}};

  std::vector<json> rows(grid.size());
  std::vector<double> Ms(grid.size()), ms(grid.size());
  parallel_rows(grid.size(), [&](std::size_t i) {
    const std::size_t n = grid[i];
    json row{{"n", n}};
    try {
      auto M = parameter_M(norm, space, n, strat);
      auto m = parameter_m(norm, space, n, strat);
      row["M"] = M.value;
      row["m"] = m.value;
      row["M_strategy"] = M.strategy_log;
      row["m_strategy"] = m.strategy_log;
      Ms[i] = M.value;
      ms[i] = m.value;
    } catch (const std::exception& e) {
      row["error"] = e.what();
      Ms[i] = ms[i] = std::nan("");
    }
    rows[i] = std::move(row);
  });

  Table t;
  t.x_label = "n";
  for (std::size_t n : grid) t.x.push_back(static_cast<double>(n));
  t.add_column("M", Ms);
  t.add_column("m", ms);
  emit(o, config,
       json{{"rows", rows}, {"successive_only", norm->successive_only_params()}}, t,
       "params");
  return 0;
}

int run_distance(Opts& o, const ConfigLayer& layer) {
  layer.apply("--space", "space", o.space);
  layer.apply("--centralizer", "centralizer", o.centralizer);
  layer.apply("--n", "n", o.grid);
  layer.apply("--atoms", "atoms", o.atoms);
  layer.apply("--seed", "seed", o.seed);
  layer.apply("--rounds", "rounds", o.rounds);

  auto grid = parse_grid(o.grid);
  if (o.atoms == 0) o.atoms = *std::max_element(grid.begin(), grid.end());
  auto space = AtomSpace::counting(o.atoms);
  auto norm = parse_space(o.space);
  auto omega = parse_centralizer(o.centralizer);

  json config{{"subcommand", "distance"}, {"space", o.space},
              {"centralizer", o.centralizer}, {"n", o.grid},
              {"atoms", o.atoms},          {"seed", o.seed},
              {"rounds", o.rounds}};

  std::vector<json> rows(grid.size());
  std::vector<double> dists(grid.size());
  parallel_rows(grid.size(), [&](std::size_t i) {
    const std::size_t n = grid[i];
    json row{{"n", n}};
    try {
      TrivialityConfig cfg;
      cfg.seed = o.seed == 0 ? 11 : o.seed;
      cfg.rounds = o.rounds;
      auto est = triviality_distance(*omega, norm, canonical_family(space, norm, n), cfg);
      row["distance"] = est.lower_probe;
      row["probes"] = est.solver_trace.probes;
      row["initial_value"] = est.solver_trace.initial_value;
      dists[i] = est.lower_probe;
    } catch (const std::exception& e) {
      row["error"] = e.what();
      dists[i] = std::nan("");
    }
    rows[i] = std::move(row);
  });

  Table t;
  t.x_label = "n";
  for (std::size_t n : grid) t.x.push_back(static_cast<double>(n));
  t.add_column("distance", dists);
  emit(o, config, json{{"rows", rows}}, t, "distance");
  return 0;
}

int run_psi(Opts& o, const ConfigLayer& layer) {
  layer.apply("--space", "space", o.space);
  layer.apply("--centralizer", "centralizer", o.centralizer);
  layer.apply("--n", "n", o.grid);
  layer.apply("--atoms", "atoms", o.atoms);
  layer.apply("--seed", "seed", o.seed);
  layer.apply("--budget", "budget", o.budget);
  layer.apply("--track", "track", o.track);
  layer.apply("--p", "p", o.p);
  layer.apply("--log-base", "log_base", o.log_base);

  auto grid = parse_grid(o.grid);
  if (o.atoms == 0) o.atoms = 2 * *std::max_element(grid.begin(), grid.end());
  auto space = AtomSpace::counting(o.atoms);
  auto norm = parse_space(o.space);
  auto omega = parse_centralizer(o.centralizer);

  // the closed-form tracks are natural-log expressions; the configured base is
  // recorded in the report so downstream plots can relabel axes
  json config{{"subcommand", "psi"}, {"space", o.space},  {"centralizer", o.centralizer},
              {"n", o.grid},         {"atoms", o.atoms},  {"seed", o.seed},
              {"budget", o.budget},  {"track", o.track},  {"p", o.p},
              {"log_base", o.log_base}};

  auto lower_of = [&](std::size_t n) {
    if (o.track == "kp") return psi_track_kalton_peck(o.p, n);
    if (o.track == "schreier") return psi_track_schreier(n);
    if (o.track == "pconv") return psi_track_pconv_schreier(o.p, n);
    throw std::invalid_argument("unknown track '" + o.track + "'");
  };

  std::vector<json> rows(grid.size());
  std::vector<double> lowers(grid.size()), uppers(grid.size());
  parallel_rows(grid.size(), [&](std::size_t i) {
    const std::size_t n = grid[i];
    json row{{"n", n}};
    try {
      TrivialityConfig cfg;
      cfg.seed = o.seed == 0 ? 11 : o.seed;
      auto scan = psi_upper_scan(*omega, norm, space, n, o.budget, cfg);
      lowers[i] = lower_of(n);
      uppers[i] = scan.value;
      row["lower_track"] = lowers[i];
      row["upper_scan"] = uppers[i];
      row["scanned"] = scan.scanned_values;
    } catch (const std::exception& e) {
      row["error"] = e.what();
      lowers[i] = uppers[i] = std::nan("");
    }
    rows[i] = std::move(row);
  });

  Table t;
  t.x_label = "n";
  for (std::size_t n : grid) t.x.push_back(static_cast<double>(n));
  t.add_column("lower_track", lowers);
  t.add_column("upper_scan", uppers);
  emit(o, config, json{{"rows", rows}}, t, "psi");
  return 0;
}

int run_decompose(Opts& o, const ConfigLayer& layer) {
  layer.apply("--couple", "couple", o.couple);
  layer.apply("--theta", "theta", o.theta);
  layer.apply("--atoms", "atoms", o.atoms);
  layer.apply("--count", "count", o.count);
  layer.apply("--seed", "seed", o.seed);
  layer.apply("--x", "x", o.x_file);
  if (o.atoms == 0) o.atoms = 16;

  const auto semi = o.couple.find(';');
  if (semi == std::string::npos)
    throw std::invalid_argument("--couple needs two spaces separated by ';'");
  auto norm0 = parse_space(o.couple.substr(0, semi));
  auto norm1 = parse_space(o.couple.substr(semi + 1));

  json config{{"subcommand", "decompose"}, {"couple", o.couple}, {"theta", o.theta},
              {"atoms", o.atoms},          {"count", o.count},   {"seed", o.seed}};
  if (!o.x_file.empty()) config["x"] = o.x_file;

  std::vector<KVec> inputs;
  if (!o.x_file.empty()) {
    std::ifstream f(o.x_file);
    if (!f) throw std::runtime_error("cannot read '" + o.x_file + "'");
    inputs.push_back(kvec_from_json(json::parse(f)));
  } else {
    auto space = AtomSpace::counting(o.atoms);
    std::mt19937_64 rng(o.seed == 0 ? 5 : o.seed);
    std::uniform_real_distribution<double> unif(0.1, 2.0);
    for (int t = 0; t < o.count; ++t) {
      KVec x = KVec::zero(space);
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = unif(rng);
      inputs.push_back(std::move(x));
    }
  }

  // closed-form comparator available for the (L_1, L_inf) couple
  const bool closed_form = norm0->kind() == "lp" && norm1->kind() == "lp" &&
                           std::dynamic_pointer_cast<const LpNorm>(norm0)->p() == 1.0 &&
                           std::dynamic_pointer_cast<const LpNorm>(norm1)->p() == kInfExponent;
  const double p_interp = closed_form ? 1.0 / (1.0 - o.theta) : 0.0;

  std::vector<json> rows(inputs.size());
  std::vector<double> vals(inputs.size()), resid(inputs.size());
  parallel_rows(inputs.size(), [&](std::size_t i) {
    json row{{"index", i}};
    try {
      auto dec = lozanovskii_decompose(norm0, norm1, o.theta, inputs[i]);
      row["decomposition"] = dec;
      row["nonconvex_warning"] = dec.nonconvex_warning;
      vals[i] = dec.achieved_value;
      resid[i] = 0.0;
      if (closed_form) {
        LpNorm lp(p_interp);
        KaltonPeckCentralizer kp(std::make_shared<LpNorm>(p_interp));
        KVec want = -p_interp * kp(inputs[i]);
        KVec got = derivation_from_decomposition(dec, inputs[i]);
        double scale = 0.0, err = 0.0;
        for (std::size_t k = 0; k < want.size(); ++k) {
          scale = std::max(scale, std::fabs(want[k]));
          err = std::max(err, std::fabs(got[k] - want[k]));
        }
        resid[i] = scale > 0 ? err / scale : err;
        row["closed_form_value"] = lp(inputs[i]);
        row["derivation_residual"] = resid[i];
      }
    } catch (const std::exception& e) {
      row["error"] = e.what();
      vals[i] = resid[i] = std::nan("");
    }
    rows[i] = std::move(row);
  });

  Table t;
  t.x_label = "index";
  for (std::size_t i = 0; i < inputs.size(); ++i) t.x.push_back(static_cast<double>(i));
  t.add_column("achieved_value", vals);
  if (closed_form) t.add_column("derivation_residual", resid);
  emit(o, config, json{{"rows", rows}}, t, "decompose");
  return 0;
}

int run_constants(Opts& o, const ConfigLayer& layer) {
  layer.apply("--space", "space", o.space);
  layer.apply("--centralizer", "centralizer", o.centralizer);
  layer.apply("--atoms", "atoms", o.atoms);
  layer.apply("--samples", "samples", o.samples);
  layer.apply("--seed", "seed", o.seed);
  if (o.atoms == 0) o.atoms = 16;

  auto space = AtomSpace::counting(o.atoms);
  auto norm = parse_space(o.space);
  auto omega = parse_centralizer(o.centralizer);
  SamplerConfig cfg{o.samples, o.seed == 0 ? 1 : o.seed};

  json config{{"subcommand", "constants"}, {"space", o.space},
              {"centralizer", o.centralizer}, {"atoms", o.atoms},
              {"samples", o.samples},      {"seed", cfg.seed}};
  const double ql = quasi_linearity_constant(*omega, *norm, space, cfg);
  const double cc = centralizer_constant(*omega, *norm, space, cfg);

  Table t;
  t.x_label = "samples";
  t.x.push_back(static_cast<double>(o.samples));
  t.add_column("quasi_linearity", {ql});
  t.add_column("centralizer", {cc});
  emit(o, config, json{{"quasi_linearity_constant", ql}, {"centralizer_constant", cc}}, t,
       "constants");
  std::cout << "quasi_linearity_constant " << ql << "\n"
            << "centralizer_constant " << cc << "\n";
  return 0;
}

int run_suite(const Opts& o) {
  auto results = acceptance::run_all();
  json rows = json::array();
  bool all = true;
  for (const auto& r : results) {
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.index << ": " << r.name << " ("
              << r.detail << ") [" << r.seconds << "s]\n";
    rows.push_back(
        {{"index", r.index}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    all = all && r.passed;
  }
  json config{{"subcommand", "suite"}};
  write_file(out_path(o.out_dir, "report.json"),
             make_report(config, json{{"criteria", rows}, {"all_passed", all}}).dump(2) + "\n");
  std::cout << (all ? "acceptance: all criteria passed" : "acceptance: FAILURES present")
            << "\n";
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twistlab: centralizer and singularity diagnostics on finite Koethe lattices"};
  app.require_subcommand(1);

  Opts o;
  app.add_option("--config", o.config_path, "JSON config file; flags override its values");
  app.add_option("--out", o.out_dir, "output directory for report.json / CSV / SVG");
  app.add_flag("--plot", o.plot, "also write SVG line plots");

  auto add_common = [&](CLI::App* c, bool with_centralizer) {
    c->add_option("--space", o.space, "norm shorthand, e.g. lp:2, lorentz:2,1, schreier");
    if (with_centralizer)
      c->add_option("--centralizer", o.centralizer,
                    "centralizer shorthand, e.g. kp:lp:2, kappa");
    c->add_option("--n", o.grid, "n-grid: comma list or lo..hi");
    c->add_option("--atoms", o.atoms, "atom count of the model space");
    c->add_option("--seed", o.seed, "RNG seed");
  };

  CLI::App* nab = app.add_subcommand("nabla", "sign averages over disjoint families");
  add_common(nab, true);
  nab->add_option("--mc-samples", o.mc_samples, "Monte-Carlo samples above the exact cap");
  nab->add_option("--exact-cap", o.exact_cap, "largest n enumerated exactly");

  CLI::App* par = app.add_subcommand("params", "growth parameters M(n), m(n)");
  add_common(par, false);
  par->add_option("--random-families", o.random_families, "random families per n");
  par->add_option("--local-steps", o.local_steps, "local-search steps per random family");

  CLI::App* dis = app.add_subcommand("distance", "triviality distance on canonical families");
  add_common(dis, true);
  dis->add_option("--rounds", o.rounds, "probe/descent rounds");

  CLI::App* psi = app.add_subcommand("psi", "psi lower tracks and upper scans");
  add_common(psi, true);
  psi->add_option("--budget", o.budget, "random families in the upper scan");
  psi->add_option("--track", o.track, "lower track: kp, schreier, or pconv");
  psi->add_option("--p", o.p, "exponent for the kp / pconv tracks");
  psi->add_option("--log-base", o.log_base, "log base recorded in the report");

  CLI::App* dec = app.add_subcommand("decompose", "Lozanovskii factorization of a couple");
  dec->add_option("--couple", o.couple, "two norm shorthands separated by ';'");
  dec->add_option("--theta", o.theta, "interpolation parameter in (0,1)");
  dec->add_option("--atoms", o.atoms, "atom count for random inputs");
  dec->add_option("--count", o.count, "number of random inputs");
  dec->add_option("--seed", o.seed, "RNG seed");
  dec->add_option("--x", o.x_file, "JSON file with a single input vector");

  CLI::App* con =
      app.add_subcommand("constants", "empirical quasi-linearity / centralizer constants");
  add_common(con, true);
  con->add_option("--samples", o.samples, "sample count");

  CLI::App* sui = app.add_subcommand("suite", "run the acceptance battery");

  CLI11_PARSE(app, argc, argv);

  try {
    const json file = load_config(o.config_path);
    if (nab->parsed()) return run_nabla(o, {file, nab});
    if (par->parsed()) return run_params(o, {file, par});
    if (dis->parsed()) return run_distance(o, {file, dis});
    if (psi->parsed()) return run_psi(o, {file, psi});
    if (dec->parsed()) return run_decompose(o, {file, dec});
    if (con->parsed()) return run_constants(o, {file, con});
    if (sui->parsed()) return run_suite(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
