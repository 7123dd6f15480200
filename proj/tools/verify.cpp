// verify: run seeded verification suites and write JSON / table reports.
//
//   verify dewitt --n 16 --seeds 1-5 --out dewitt.json
//   verify convergence --n 8,16,32 --seeds 1
//   verify all --no-timings --json
//   verify snapshot --kind path --seed 3 --out path.json
//
// Exit codes: 0 pass, 1 check failure, 2 usage, 3 numerical failure.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "adm/random_fields.hpp"
#include "adm/snapshot.hpp"
#include "adm/suite.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct SuiteOptions {
  int dim = 2;
  std::string n;
  std::string n_list;
  int kmax = 2;
  double eps = 0.05;
  std::string seeds = "1-5";
  std::string grad_method = "higher_order_fd";
  double grad_eta = 3e-4;
  bool richardson = false;
  double ode_step = 0.025;
  std::map<std::string, double> tolerances;
  std::string out;
  bool json = false;
  bool table = false;
  bool no_timings = false;
  std::string fixture;
};

std::string flag_name(std::string key) {
  for (char& c : key) {
    if (c == '_') c = '-';
  }
  return key;
}

void add_suite_options(CLI::App* cmd, SuiteOptions& o) {
  cmd->add_option("--dim", o.dim, "Torus dimension (2 or 3)")->capture_default_str();
  cmd->add_option("--n", o.n, "Grid size, or a comma list for convergence (e.g. 8,16,32)");
  cmd->add_option("--n-list", o.n_list, "Grid sizes used by the convergence tables of 'all'");
  cmd->add_option("--kmax", o.kmax, "Band limit of seeded fields")->capture_default_str();
  cmd->add_option("--eps", o.eps, "Perturbation amplitude of seeded metrics")->capture_default_str();
  cmd->add_option("--seeds", o.seeds, "Seed list: 1-5, 1,2,7 or 1-3,9")->capture_default_str();
  cmd->add_option("--grad-method", o.grad_method, "central_fd or higher_order_fd")
      ->check(CLI::IsMember({"central_fd", "higher_order_fd"}))
      ->capture_default_str();
  cmd->add_option("--grad-eta", o.grad_eta, "Relative finite-difference step")->capture_default_str();
  cmd->add_flag("--richardson", o.richardson, "Richardson-refine gradients");
  cmd->add_option("--ode-step", o.ode_step, "Time sample spacing of gaussian extensions")->capture_default_str();
  for (const auto& [key, value] : adm::default_tolerances()) {
    auto* opt = cmd->add_option_function<double>(
        "--tol-" + flag_name(key), [&o, k = key](double v) { o.tolerances[k] = v; },
        "Tolerance for " + key);
    opt->default_str(std::to_string(value));
  }
  cmd->add_option("--out", o.out, "Write the JSON report here");
  auto* json = cmd->add_flag("--json", o.json, "Print the JSON report to stdout");
  cmd->add_flag("--table", o.table, "Print a table to stdout (default)")->excludes(json);
  cmd->add_flag("--no-timings", o.no_timings, "Omit wall-clock timings from the JSON report");
  cmd->add_option("--fixture", o.fixture, "MetricPath JSON used instead of seeded paths")
      ->check(CLI::ExistingFile);
}

adm::SuiteConfig build_config(const std::string& suite, const SuiteOptions& o) {
  adm::SuiteConfig c;
  c.suite = adm::parse_suite(suite);
  c.dim = o.dim;
  c.kmax = o.kmax;
  c.epsilon = o.eps;
  c.seeds = adm::parse_seed_list(o.seeds);
  if (!o.n.empty()) {
    const std::vector<int> ns = adm::parse_int_list(o.n);
    if (ns.size() == 1) {
      c.n = ns.front();
    } else if (c.suite == adm::SuiteKind::convergence || c.suite == adm::SuiteKind::all) {
      c.n_list = ns;
      if (c.suite == adm::SuiteKind::convergence) c.n = ns.front();
    } else {
      throw adm::InvalidArgument("--n takes a single size for suite '" + suite + "'");
    }
  }
  if (!o.n_list.empty()) c.n_list = adm::parse_int_list(o.n_list);
  c.gradient.method = o.grad_method == "central_fd" ? adm::GradientStrategy::Method::central_fd
                                                    : adm::GradientStrategy::Method::higher_order_fd;
  c.gradient.eta = o.grad_eta;
  c.gradient.richardson = o.richardson;
  c.ode_step = o.ode_step;
  c.tolerances = o.tolerances;
  c.output = o.out;
  if (!o.fixture.empty()) c.fixture = adm::metric_path_from_json(adm::read_json_file(o.fixture));
  return c;
}

int run(const std::string& suite, const SuiteOptions& o) {
  adm::SuiteConfig config;
  try {
    config = build_config(suite, o);
    config.validate();
  } catch (const adm::NumericalFailure&) {
    throw;
  } catch (const adm::DegenerateMetric& e) {
    std::fprintf(stderr, "verify: fixture: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "verify: %s\n", e.what());
    return kExitUsage;
  }

  adm::SuiteReport report;
  try {
    report = adm::run_suite(config);
  } catch (const adm::NumericalFailure& e) {
    std::fprintf(stderr, "verify: numerical failure at %s\n", e.what());
    return kExitNumerical;
  }

  const nlohmann::json j = report.to_json(!o.no_timings);
  if (!o.out.empty()) adm::write_json_file(o.out, j);
  if (o.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << report.to_table();
  }
  return report.passed() ? kExitPass : kExitCheckFailure;
}

struct SnapshotOptions {
  std::string kind = "metric";
  std::uint64_t seed = 1;
  int dim = 2;
  int n = 16;
  int kmax = 2;
  double amplitude = 0.05;
  std::string out;
};

int snapshot(const SnapshotOptions& o) {
  const adm::TorusGrid grid(o.dim, o.n);
  nlohmann::json j;
  if (o.kind == "path") {
    j = adm::to_json(adm::fixtures::metric_path(grid, o.seed, o.kmax, o.amplitude));
  } else {
    adm::FieldKind kind = adm::FieldKind::metric;
    if (o.kind == "scalar") kind = adm::FieldKind::scalar;
    if (o.kind == "vector") kind = adm::FieldKind::vector;
    if (o.kind == "sym2") kind = adm::FieldKind::sym2;
    const adm::AnyField f = adm::random_band_limited(grid, o.seed, o.kmax, kind, o.amplitude);
    j = std::visit([](const auto& v) { return adm::to_snapshot(v); }, f);
  }
  if (o.out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    adm::write_json_file(o.out, j);
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seeded verification of the constraint bracket and gaussian extension identities"};
  app.require_subcommand(1);
  app.footer("Env: VERIFY_THREADS caps worker threads. Exit: 0 pass, 1 check failure, 2 usage, 3 numerical failure.");

  SuiteOptions suite_opts;
  std::string chosen;
  for (const char* name : {"dewitt", "anomaly", "gaussian", "algebroid", "convergence", "all"}) {
    CLI::App* cmd = app.add_subcommand(name, std::string("Run the ") + name + " suite");
    add_suite_options(cmd, suite_opts);
    cmd->callback([&chosen, name] { chosen = name; });
  }

  SnapshotOptions snap;
  CLI::App* snap_cmd = app.add_subcommand("snapshot", "Write a seeded field or metric path as JSON");
  snap_cmd->add_option("--kind", snap.kind, "scalar, vector, sym2, metric or path")
      ->check(CLI::IsMember({"scalar", "vector", "sym2", "metric", "path"}))
      ->capture_default_str();
  snap_cmd->add_option("--seed", snap.seed)->capture_default_str();
  snap_cmd->add_option("--dim", snap.dim)->capture_default_str();
  snap_cmd->add_option("--n", snap.n)->capture_default_str();
  snap_cmd->add_option("--kmax", snap.kmax)->capture_default_str();
  snap_cmd->add_option("--amplitude,--eps", snap.amplitude)->capture_default_str();
  snap_cmd->add_option("--out", snap.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (snap_cmd->parsed()) return snapshot(snap);
    return run(chosen, suite_opts);
  } catch (const adm::NumericalFailure& e) {
    std::fprintf(stderr, "verify: numerical failure at %s\n", e.what());
    return kExitNumerical;
  } catch (const adm::DegenerateMetric& e) {
    std::fprintf(stderr, "verify: %s\n", e.what());
    return kExitNumerical;
  } catch (const adm::InvalidArgument& e) {
    std::fprintf(stderr, "verify: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "verify: %s\n", e.what());
    return kExitUsage;
  }
}
