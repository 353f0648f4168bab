#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "check_suite.hpp"
#include "grid.hpp"
#include "spherehit/bessel_hitting.hpp"
#include "spherehit/drift_series.hpp"
#include "spherehit/errors.hpp"
#include "spherehit/mc_oracle.hpp"
#include "spherehit/transforms.hpp"
#include "table.hpp"

namespace {

using namespace spherehit;
using cli::Cell;
using cli::Table;
using json = nlohmann::ordered_json;

constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

struct Options {
  int dim = 3;       // sphere-exp
  int geom_dim = 0;  // 0: length of --x
  double radius = 1.0;
  std::string start;
  std::string drift;
  std::string grid;
  double tol = 1e-10;
  int max_terms = 400;
  std::string method = "talbot";
  int nodes = 16;
  double rel = 1e-10;
  std::string output;
  std::string format;
  bool no_timestamp = false;
  // sphere-exp
  double xi = 1.0;
  double alpha = 0.0;
  double vnorm = 1.0;
  // check
  std::string suite = "all";
  // mc-compare
  std::int64_t paths = 1000000;
  std::uint64_t seed = 42;
  double dt = 1e-3;
  double t_max = 60.0;
  double t_max_driftless = 1e6;
  std::string lam_grid = "0.5,1";
};

unsigned thread_cap() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SPHEREHIT_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
  }
  return n;
}

// Rows come back in grid order; the first failure in grid order is rethrown.
template <class F>
std::vector<std::vector<Cell>> eval_grid(const std::vector<double>& grid, F row) {
  const std::size_t n = grid.size();
  std::vector<std::vector<Cell>> rows(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        rows[i] = row(grid[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const unsigned k = std::min<std::size_t>(thread_cap(), n);
    for (unsigned i = 1; i < k; ++i) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

InversionControl inversion(const Options& o) {
  InversionMethod m = InversionMethod::talbot_fixed;
  if (o.method == "stehfest") m = InversionMethod::gaver_stehfest;
  else if (o.method == "dehoog") m = InversionMethod::de_hoog;
  return InversionControl(m, o.nodes, o.rel);
}

Geometry geometry(const Options& o) {
  std::vector<double> x = cli::parse_vector(o.start);
  std::vector<double> v = o.drift.empty() ? std::vector<double>{} : cli::parse_vector(o.drift);
  const int d = o.geom_dim > 0 ? o.geom_dim : static_cast<int>(x.size());
  return Geometry(d, o.radius, std::move(x), std::move(v));
}

json job_json(const std::string& command, const Options& o, const std::vector<double>& grid) {
  json j;
  j["command"] = command;
  if (command == "sphere-exp") {
    j["dim"] = o.dim;
    j["xi"] = o.xi;
    j["alpha"] = o.alpha;
    j["drift_norm"] = o.vnorm;
  } else if (command != "check") {
    const Geometry g = geometry(o);
    j["dim"] = g.dim();
    j["radius"] = g.radius();
    j["start"] = g.start();
    j["drift"] = g.drift();
  }
  if (command != "check") {
    j["grid"] = {{"spec", o.grid}, {"values", grid}};
    j["series"] = {{"tol", o.tol}, {"max_terms", o.max_terms}};
  } else {
    j["suite"] = o.suite;
  }
  if (command == "density" || command == "tail" || command == "asymptotic" ||
      command == "mc-compare") {
    j["inversion"] = {{"method", o.method}, {"nodes", o.nodes}, {"target_rel_err", o.rel}};
  }
  if (command == "mc-compare") {
    j["mc"] = {{"paths", o.paths},          {"seed", o.seed},
               {"dt", o.dt},                {"t_max", o.t_max},
               {"t_max_driftless", o.t_max_driftless}, {"lam", cli::parse_grid(o.lam_grid)}};
  }
  j["format"] = o.format;
  j["output"] = o.output.empty() ? "-" : o.output;
  return j;
}

void emit(const Options& o, const json& job, const std::string& key, const Table& table) {
  std::ofstream file;
  if (!o.output.empty()) {
    file.open(o.output, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot open output file " + o.output);
  }
  std::ostream& os = o.output.empty() ? std::cout : file;
  if (o.format == "json") {
    cli::write_json(os, job, key, table, !o.no_timestamp);
  } else {
    cli::write_csv(os, table);
  }
}

int run_grid_command(const std::string& command, const Options& o) {
  const std::vector<double> grid = cli::parse_grid(o.grid);
  const SeriesControl ctrl(o.tol, o.max_terms);
  const InversionControl inv = inversion(o);
  Table table;
  if (command == "sphere-exp") {
    for (double t : grid) {
      if (t < 0.0) throw DomainError("sphere-exp times must be nonnegative");
    }
    table.columns = {"t", "expectation"};
    table.rows = eval_grid(grid, [&](double t) -> std::vector<Cell> {
      return {t, transforms::sphere_expectation({t, o.xi, o.alpha, o.dim, o.vnorm}, ctrl)};
    });
  } else {
    const Geometry g = geometry(o);
    if (command == "density" || command == "tail") {
      table.columns = {"t", command, "trunc_bound", "terms"};
      table.rows = eval_grid(grid, [&](double t) -> std::vector<Cell> {
        const DensityEstimate e =
            command == "density" ? drift::drift_density(g, t, ctrl, inv) : drift::drift_tail(g, t, ctrl, inv);
        return {t, e.value, e.trunc_bound, std::int64_t{e.terms_used}};
      });
    } else if (command == "laplace") {
      table.columns = {"lam", "drift_lt", "joint_lt"};
      table.rows = eval_grid(grid, [&](double lam) -> std::vector<Cell> {
        return {lam, transforms::drift_lt(g, lam, ctrl), transforms::joint_lt(g, lam, ctrl)};
      });
    } else {
      table.columns = {"t", "tail", "asymptotic", "ratio"};
      table.rows = eval_grid(grid, [&](double t) -> std::vector<Cell> {
        const double a = drift::tail_asymptotic(g, t);
        const DensityEstimate e = drift::drift_tail(g, t, ctrl, inv);
        return {t, e.value, a, e.underflow_flag ? std::nan("") : e.value / a};
      });
    }
  }
  emit(o, job_json(command, o, grid), "results", table);
  return 0;
}

int run_check(const Options& o) {
  const std::vector<cli::CheckOutcome> results = cli::run_checks(o.suite);
  Table table;
  table.columns = {"identity", "measured", "tolerance", "pass", "detail"};
  bool ok = true;
  for (const auto& r : results) {
    table.rows.push_back({r.identity, r.measured, r.tolerance, r.pass, r.detail});
    if (!r.pass) {
      ok = false;
      std::cerr << "check failed: " << r.identity << " measured " << cli::format_real(r.measured)
                << " (tolerance " << cli::format_real(r.tolerance) << ") " << r.detail << '\n';
    }
  }
  emit(o, job_json("check", o, {}), "checks", table);
  return ok ? 0 : kExitNumerical;
}

int run_mc_compare(const Options& o) {
  const Geometry g = geometry(o);
  const std::vector<double> times = cli::parse_grid(o.grid);
  const std::vector<double> lams = cli::parse_grid(o.lam_grid);
  const SeriesControl ctrl(o.tol, o.max_terms);
  const InversionControl inv = inversion(o);
  const mc::McRun run(o.seed, o.paths, o.dt, o.t_max, true);
  if (times.back() >= o.t_max) throw DomainError("tail times must be below t_max");
  const unsigned threads = thread_cap();
  Table table;
  table.columns = {"statistic", "parameter", "mc", "stderr", "analytic", "z"};
  auto add = [&](const std::string& name, double param, const mc::Estimate& e, double exact) {
    const double z = (e.value - exact) / e.std_error;
    table.rows.push_back({name, param, e.value, e.std_error, exact, z});
  };
  const mc::McResult drifted = mc::simulate(g, run, threads);
  const hitting::RadialInstance radial(sf::Order(g.nu()), g.start_norm(), g.radius());
  const double p_hit = g.has_drift()
                           ? std::exp(-g.drift_dot_start()) *
                                 transforms::joint_lt(g, 0.5 * g.drift_norm() * g.drift_norm(), ctrl)
                           : hitting::hitting_probability(radial);
  add("hit_probability", 0.0, drifted.hit_probability, p_hit);
  for (double t : times) add("tail", t, mc::empirical_tail(drifted, t), drift::drift_tail(g, t, ctrl, inv).value);
  if (g.dim() >= 3) {
    const mc::McRun still(o.seed, o.paths, o.dt, o.t_max_driftless, true);
    const mc::McResult driftless = mc::simulate(g.with_drift({}), still, threads);
    add("driftless_hit_probability", 0.0, driftless.hit_probability,
        hitting::hitting_probability(radial));
    if (g.has_drift()) {
      for (double lam : lams) {
        add("joint_lt", lam, mc::empirical_joint_lt(driftless, lam, g), transforms::joint_lt(g, lam, ctrl));
      }
    }
  }
  double max_z = 0.0;
  for (const auto& row : table.rows) max_z = std::max(max_z, std::abs(std::get<double>(row[5])));
  std::cerr << "max |z| = " << cli::format_real(max_z) << '\n';
  emit(o, job_json("mc-compare", o, times), "statistics", table);
  return 0;
}

void add_geometry(CLI::App* sub, Options& o) {
  sub->add_option("--dim", o.geom_dim, "Dimension d >= 2 (default: length of --x)")
      ->check(CLI::Range(2, 1000));
  sub->add_option("--r", o.radius, "Sphere radius")->check(CLI::PositiveNumber);
  sub->add_option("--x", o.start, "Start point, comma separated")->required();
  sub->add_option("--v", o.drift, "Drift, comma separated (default 0)");
}

void add_series(CLI::App* sub, Options& o) {
  sub->add_option("--tol", o.tol, "Absolute truncation tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--max-terms", o.max_terms, "Series term cap")->check(CLI::PositiveNumber);
}

void add_inversion(CLI::App* sub, Options& o) {
  sub->add_option("--inversion", o.method, "Laplace inversion method")
      ->check(CLI::IsMember({"talbot", "stehfest", "dehoog"}));
  sub->add_option("--nodes", o.nodes, "Starting node count");
  sub->add_option("--rel-err", o.rel, "Inversion relative error target");
}

void add_output(CLI::App* sub, Options& o) {
  sub->add_option("-o,--output", o.output, "Output file (default stdout)");
  sub->add_option("--format", o.format, "csv or json (default from the file extension)")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_flag("--no-timestamp", o.no_timestamp, "Omit the timestamp from JSON output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hitting times of spheres by Brownian motion with drift"};
  app.require_subcommand(1);
  Options o;

  auto* density = app.add_subcommand("density", "Density of the hitting time on a t-grid");
  auto* tail = app.add_subcommand("tail", "P(t < sigma < inf) on a t-grid");
  auto* laplace = app.add_subcommand("laplace", "Laplace transforms on a lam-grid");
  auto* asym = app.add_subcommand("asymptotic", "Tail against its large-t asymptotic");
  for (auto* sub : {density, tail, asym}) {
    add_geometry(sub, o);
    add_series(sub, o);
    add_inversion(sub, o);
    add_output(sub, o);
    sub->add_option("--t", o.grid, "Time grid a:b:n, ga:b:n or a list")->required();
  }
  add_geometry(laplace, o);
  add_series(laplace, o);
  add_output(laplace, o);
  laplace->add_option("--lam", o.grid, "lam grid a:b:n, ga:b:n or a list")->required();

  auto* sphere = app.add_subcommand("sphere-exp", "E exp(xi <v, theta_t>) on a t-grid");
  sphere->add_option("--dim", o.dim, "Dimension d >= 2")->check(CLI::Range(2, 1000));
  sphere->add_option("--xi", o.xi, "Radial scale")->check(CLI::NonNegativeNumber);
  sphere->add_option("--alpha", o.alpha, "Cosine between theta_0 and v")->check(CLI::Range(-1.0, 1.0));
  sphere->add_option("--vnorm", o.vnorm, "|v|")->check(CLI::NonNegativeNumber);
  sphere->add_option("--t", o.grid, "Time grid")->required();
  add_series(sphere, o);
  add_output(sphere, o);

  auto* check = app.add_subcommand("check", "Run the identity suite");
  check->add_option("--suite", o.suite, "all, bounds, gegenbauer, keystone or pde")
      ->check(CLI::IsMember({"all", "bounds", "gegenbauer", "keystone", "pde"}));
  add_output(check, o);

  auto* mcc = app.add_subcommand("mc-compare", "Monte Carlo against the analytic values");
  add_geometry(mcc, o);
  add_series(mcc, o);
  add_inversion(mcc, o);
  add_output(mcc, o);
  mcc->add_option("--t", o.grid, "Tail times")->required();
  mcc->add_option("--lam", o.lam_grid, "Joint transform arguments");
  mcc->add_option("--paths", o.paths, "Number of paths")->check(CLI::PositiveNumber);
  mcc->add_option("--seed", o.seed, "Seed");
  mcc->add_option("--dt", o.dt, "Step next to the sphere")->check(CLI::PositiveNumber);
  mcc->add_option("--t-max", o.t_max, "Censoring time of the drifted run")->check(CLI::PositiveNumber);
  mcc->add_option("--t-max-driftless", o.t_max_driftless, "Censoring time of the driftless run")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  if (o.format.empty()) {
    const bool report = mcc->parsed() || check->parsed();
    if (o.output.ends_with(".json")) o.format = "json";
    else if (o.output.ends_with(".csv")) o.format = "csv";
    else o.format = report ? "json" : "csv";
  }

  try {
    if (check->parsed()) return run_check(o);
    if (mcc->parsed()) return run_mc_compare(o);
    for (auto* sub : {density, tail, laplace, asym, sphere}) {
      if (sub->parsed()) return run_grid_command(sub->get_name(), o);
    }
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << " (achieved error "
              << cli::format_real(e.achieved()) << ")\n";
    return kExitNumerical;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}
