// Experiment runner: discrete Wasserstein gradient flow, proximal steps,
// geometry identities, and the inequality sweep, with reproducible CSV and
// manifest output.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wgf/flow.hpp"
#include "wgf/geometry.hpp"
#include "wgf/json_io.hpp"
#include "wgf/proximal.hpp"
#include "wgf/transport.hpp"
#include "wgf/verify.hpp"
#include "wgf/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCheckFailed = 2;

struct RunContext {
  std::string out_dir;
  std::vector<std::string> argv_echo;  // canonical re-runnable invocation
  json extra;                          // per-command manifest fields
  long pass_count = 0;
  long fail_count = 0;
};

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << contents;
}

void write_manifest(const RunContext& ctx, const std::string& subcommand, double elapsed_ms) {
  json manifest{{"tool_version", wgf::kVersion},
                {"subcommand", subcommand},
                {"argv", ctx.argv_echo},
                {"timing_ms", elapsed_ms},
                {"pass_count", ctx.pass_count},
                {"fail_count", ctx.fail_count}};
  for (auto& [key, value] : ctx.extra.items()) manifest[key] = value;
  write_file(fs::path(ctx.out_dir) / "manifest.json", manifest.dump(2) + "\n");
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream parts(text);
  std::string part;
  while (std::getline(parts, part, ',')) {
    const auto dots = part.find("..");
    if (dots != std::string::npos) {
      const std::uint64_t lo = std::stoull(part.substr(0, dots));
      const std::uint64_t hi = std::stoull(part.substr(dots + 2));
      if (hi < lo) throw CLI::ValidationError("--seeds", "range is reversed");
      for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    } else if (!part.empty()) {
      seeds.push_back(std::stoull(part));
    }
  }
  if (seeds.empty()) throw CLI::ValidationError("--seeds", "no seeds given");
  return seeds;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  std::stringstream parts(text);
  std::string part;
  while (std::getline(parts, part, ',')) values.push_back(std::stoi(part));
  return values;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream parts(text);
  std::string part;
  while (std::getline(parts, part, ',')) values.push_back(std::stod(part));
  return values;
}

std::vector<std::pair<int, int>> parse_sizes(const std::string& text) {
  std::vector<std::pair<int, int>> sizes;
  std::stringstream parts(text);
  std::string part;
  while (std::getline(parts, part, ',')) {
    const auto x = part.find('x');
    if (x == std::string::npos) throw CLI::ValidationError("--sizes", "expected NxD entries");
    sizes.push_back({std::stoi(part.substr(0, x)), std::stoi(part.substr(x + 1))});
  }
  return sizes;
}

// Flat key=value defaults; values apply only where the command line is
// silent, so flags always override the file.
std::vector<std::string> apply_config_defaults(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + i);
      break;
    }
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  const auto has_flag = [&](const std::string& flag) {
    for (const auto& arg : args)
      if (arg == flag || arg.rfind(flag + "=", 0) == 0) return true;
    return false;
  };
  const auto strip = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (key.empty()) continue;
    const std::string flag = "--" + key;
    if (!has_flag(flag)) {
      args.push_back(flag);
      args.push_back(value);
    }
  }
  return args;
}

wgf::ParticleMeasure resolve_initial(const std::string& initial_point,
                                     const std::string& initial_file, std::uint64_t seed,
                                     int n_atoms, int dim, double box) {
  if (!initial_file.empty()) {
    std::ifstream in(initial_file);
    if (!in) throw CLI::ValidationError("--initial", "cannot open " + initial_file);
    return wgf::load_csv(in);
  }
  if (!initial_point.empty()) {
    return wgf::ParticleMeasure(parse_double_list(initial_point),
                                static_cast<int>(parse_double_list(initial_point).size()));
  }
  return wgf::random_measure({seed, "splitmix64/uniform-v1"}, n_atoms, dim, box);
}

// ---------------------------------------------------------------------------

struct FlowOptions {
  std::string functional = "potential:quadratic";
  std::uint64_t seed = 1;
  int n_atoms = 4;
  int dim = 2;
  double box = 1.0;
  double tau = 0.25;
  int steps = 4;
  std::string schedule;
  std::string initial_point;
  std::string initial_file;
  std::string out;
};

int run_flow(const FlowOptions& opt, RunContext& ctx) {
  const auto E = wgf::parse_functional(opt.functional);
  const auto mu0 = resolve_initial(opt.initial_point, opt.initial_file, opt.seed, opt.n_atoms,
                                   opt.dim, opt.box);
  wgf::FlowTrace trace;
  if (!opt.schedule.empty())
    trace = wgf::varying_flow(E, parse_double_list(opt.schedule), mu0);
  else
    trace = wgf::discrete_flow(E, opt.tau, opt.steps, mu0);
  trace.seed = opt.seed;

  std::ostringstream csv;
  wgf::save_trace_csv(trace, csv);
  write_file(fs::path(ctx.out_dir) / "trace.csv", csv.str());
  std::ostringstream final_csv;
  wgf::save_csv(trace.final_measure(), final_csv);
  write_file(fs::path(ctx.out_dir) / "final.csv", final_csv.str());

  ctx.pass_count = static_cast<long>(trace.steps.size()) - 1;
  ctx.extra["functional"] = E.id();
  ctx.extra["final_energy"] = trace.steps.back().energy;
  return kExitOk;
}

struct ExpFormulaOptions {
  std::string functional = "potential:quadratic";
  std::uint64_t seed = 1;
  int n_atoms = 1;
  int dim = 1;
  double box = 1.0;
  double t = 1.0;
  std::string n_list = "4,16,64,256";
  std::string initial_point;
  std::string initial_file;
  std::string out;
};

int run_expformula(const ExpFormulaOptions& opt, RunContext& ctx) {
  const auto E = wgf::parse_functional(opt.functional);
  const auto mu0 = resolve_initial(opt.initial_point, opt.initial_file, opt.seed, opt.n_atoms,
                                   opt.dim, opt.box);
  const auto table = wgf::exponential_formula_experiment(E, mu0, opt.t, parse_int_list(opt.n_list));

  std::ostringstream csv;
  wgf::save_experiment_csv(table, csv);
  write_file(fs::path(ctx.out_dir) / "experiment.csv", csv.str());

  for (const auto& row : table.rows) (row.pass ? ctx.pass_count : ctx.fail_count)++;
  ctx.extra["slope_fit"] = table.slope_fit;
  return ctx.fail_count ? kExitCheckFailed : kExitOk;
}

struct VerifyOptions {
  std::string kinds = "all";
  std::string seeds = "1..84";
  std::string functionals =
      "potential:quadratic;potential:cosine;interaction:quadratic;"
      "sum:[potential:quadratic,potential:cosine]";
  std::string sizes = "2x1,4x2,8x3";
  double box = 1.0;
  std::string out;
};

int run_verify(const VerifyOptions& opt, RunContext& ctx) {
  wgf::SweepOptions options = wgf::default_sweep_options();
  options.seeds = parse_seeds(opt.seeds);
  options.sizes = parse_sizes(opt.sizes);
  options.box = opt.box;
  if (opt.kinds != "all") {
    options.kinds.clear();
    std::stringstream parts(opt.kinds);
    std::string part;
    while (std::getline(parts, part, ','))
      if (!part.empty()) options.kinds.push_back(wgf::kind_from_name(part));
  }
  options.functionals.clear();
  {
    std::stringstream parts(opt.functionals);
    std::string part;
    while (std::getline(parts, part, ';'))
      if (!part.empty()) options.functionals.push_back(part);
  }

  const auto summary = wgf::sweep(options);

  std::ostringstream csv;
  wgf::save_sweep_csv(summary, csv);
  write_file(fs::path(ctx.out_dir) / "sweep.csv", csv.str());

  json grid{{"seeds", opt.seeds},
            {"functionals", options.functionals},
            {"sizes", opt.sizes},
            {"box", opt.box}};
  json summary_doc = wgf::summary_json(summary);
  summary_doc["grid"] = grid;
  summary_doc["tool_version"] = wgf::kVersion;
  write_file(fs::path(ctx.out_dir) / "summary.json", summary_doc.dump(2) + "\n");

  for (const auto& [name, agg] : summary.by_kind) {
    ctx.pass_count += agg.passed;
    ctx.fail_count += agg.failed + agg.errors;
  }
  ctx.extra["hypothesis_violated"] = [&] {
    long hv = 0;
    for (const auto& [name, agg] : summary.by_kind) hv += agg.hypothesis_violated;
    return hv;
  }();
  return ctx.fail_count ? kExitCheckFailed : kExitOk;
}

struct ProxOptions {
  std::string functional = "potential:quadratic";
  std::uint64_t seed = 1;
  int n_atoms = 4;
  int dim = 2;
  double box = 1.0;
  double tau = 0.25;
  std::string initial_point;
  std::string initial_file;
  std::string out;
};

int run_prox(const ProxOptions& opt, RunContext& ctx) {
  const auto E = wgf::parse_functional(opt.functional);
  const auto mu = resolve_initial(opt.initial_point, opt.initial_file, opt.seed, opt.n_atoms,
                                  opt.dim, opt.box);
  const auto result = wgf::proximal_step(E, opt.tau, mu);

  json doc = wgf::to_json(result);
  doc["functional"] = E.id();
  doc["map"] = wgf::to_json(wgf::optimal_map(result.input, result.output));
  write_file(fs::path(ctx.out_dir) / "prox.json", doc.dump(2) + "\n");
  std::ostringstream out_csv;
  wgf::save_csv(result.output, out_csv);
  write_file(fs::path(ctx.out_dir) / "output.csv", out_csv.str());

  const bool certified = result.el_residual <= wgf::kElGate;
  (certified ? ctx.pass_count : ctx.fail_count)++;
  ctx.extra["el_residual"] = result.el_residual;
  return certified ? kExitOk : kExitCheckFailed;
}

struct GeodesicOptions {
  std::uint64_t seed = 1;
  int n_atoms = 4;
  int dim = 2;
  double box = 1.0;
  double alpha = 0.5;
  std::string out;
};

int run_geodesic(const GeodesicOptions& opt, RunContext& ctx) {
  using wgf::derive_seed;
  const wgf::InstanceSeed base_seed{derive_seed(opt.seed, 0), "splitmix64/uniform-v1"};
  const wgf::InstanceSeed mu0_seed{derive_seed(opt.seed, 1), "splitmix64/uniform-v1"};
  const wgf::InstanceSeed mu1_seed{derive_seed(opt.seed, 2), "splitmix64/uniform-v1"};
  const wgf::InstanceSeed nu_seed{derive_seed(opt.seed, 3), "splitmix64/uniform-v1"};
  const auto omega = wgf::random_measure(base_seed, opt.n_atoms, opt.dim, opt.box);
  const auto mu0 = wgf::random_measure(mu0_seed, opt.n_atoms, opt.dim, opt.box);
  const auto mu1 = wgf::random_measure(mu1_seed, opt.n_atoms, opt.dim, opt.box);
  const auto nu = wgf::random_measure(nu_seed, opt.n_atoms, opt.dim, opt.box);

  const auto plan = wgf::make_based_plan(omega, mu0, mu1);
  const auto hilbert = wgf::check_hilbertian_identity(plan, opt.alpha);
  const double geo_identity =
      wgf::check_transport_geodesic_identity(omega, nu, mu0, mu1, opt.alpha);
  const auto glue = wgf::four_point_glue(omega, mu0, mu1, nu, opt.alpha);

  const double w01 = wgf::wasserstein_distance(mu0, mu1);
  const double t01 = wgf::transport_metric(omega, mu0, mu1);
  const double detour =
      wgf::wasserstein_distance(mu0, omega) + wgf::wasserstein_distance(omega, mu1);

  struct Row {
    const char* name;
    double value;
    double tolerance;
    bool pass;
  };
  const Row rows[] = {
      {"hilbertian_residual", hilbert.residual, 1e-10, hilbert.residual <= 1e-10},
      {"transport_geodesic_residual", geo_identity, 1e-10, geo_identity <= 1e-10},
      {"four_point_residual", glue.residual, 1e-10, glue.residual <= 1e-10},
      {"sandwich_lower", t01 - w01, -1e-9, t01 - w01 >= -1e-9},
      {"sandwich_upper", detour - t01, -1e-9, detour - t01 >= -1e-9},
  };

  std::ostringstream csv;
  csv << "check,value,tolerance,pass\n";
  for (const auto& row : rows) {
    csv << row.name << ',' << wgf::format_double(row.value) << ','
        << wgf::format_double(row.tolerance) << ',' << (row.pass ? 1 : 0) << '\n';
    (row.pass ? ctx.pass_count : ctx.fail_count)++;
  }
  write_file(fs::path(ctx.out_dir) / "geodesic.csv", csv.str());
  ctx.extra["plan"] = wgf::to_json(plan);
  return ctx.fail_count ? kExitCheckFailed : kExitOk;
}

}  // namespace

static int dispatch(std::vector<std::string> args);

namespace {

int run_rerun(const std::string& manifest_path, const std::string& out) {
  std::ifstream in(manifest_path);
  if (!in) {
    std::cerr << "cannot open manifest: " << manifest_path << "\n";
    return kExitUsage;
  }
  json manifest;
  in >> manifest;
  std::vector<std::string> args = manifest["argv"].get<std::vector<std::string>>();
  // Replace the recorded output directory.
  for (std::size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--out") args[i + 1] = out;
  return dispatch(std::move(args));
}

}  // namespace

static int dispatch(std::vector<std::string> args) {
  CLI::App app{"Discrete Wasserstein gradient flow toolkit", "wgf"};
  std::string config_doc;
  app.set_version_flag("--version", wgf::kVersion);
  app.require_subcommand(1);

  FlowOptions flow_opt;
  auto* flow = app.add_subcommand("flow", "Run a discrete gradient flow and save its trace");
  flow->add_option("--config", config_doc, "Flat key=value defaults (flags override)");
  flow->add_option("--functional", flow_opt.functional, "Energy spec")->capture_default_str();
  flow->add_option("--seed", flow_opt.seed, "Instance seed")->capture_default_str();
  flow->add_option("--n-atoms", flow_opt.n_atoms, "Atom count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  flow->add_option("--dim", flow_opt.dim, "Dimension")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  flow->add_option("--box", flow_opt.box, "Sampling box radius")->capture_default_str();
  flow->add_option("--tau", flow_opt.tau, "Fixed step size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  flow->add_option("-n,--steps", flow_opt.steps, "Number of proximal steps")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  flow->add_option("--schedule", flow_opt.schedule, "Comma-separated varying steps");
  flow->add_option("--initial-point", flow_opt.initial_point, "Single-atom start, e.g. '1,0'");
  flow->add_option("--initial", flow_opt.initial_file, "Measure CSV to start from");
  flow->add_option("--out", flow_opt.out, "Output directory")->required();

  ExpFormulaOptions exp_opt;
  auto* expf = app.add_subcommand("expformula", "Discrete-to-continuous convergence table");
  expf->add_option("--config", config_doc, "Flat key=value defaults (flags override)");
  expf->add_option("--functional", exp_opt.functional, "Energy spec")->capture_default_str();
  expf->add_option("--seed", exp_opt.seed, "Instance seed")->capture_default_str();
  expf->add_option("--n-atoms", exp_opt.n_atoms, "Atom count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  expf->add_option("--dim", exp_opt.dim, "Dimension")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  expf->add_option("--box", exp_opt.box, "Sampling box radius")->capture_default_str();
  expf->add_option("--t", exp_opt.t, "Flow horizon")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  expf->add_option("--n", exp_opt.n_list, "Comma-separated step counts")->capture_default_str();
  expf->add_option("--initial-point", exp_opt.initial_point, "Single-atom start");
  expf->add_option("--initial", exp_opt.initial_file, "Measure CSV to start from");
  expf->add_option("--out", exp_opt.out, "Output directory")->required();

  VerifyOptions verify_opt;
  auto* verify = app.add_subcommand("verify", "Run the inequality sweep");
  verify->add_option("--config", config_doc, "Flat key=value defaults (flags override)");
  verify->add_option("--kinds", verify_opt.kinds, "'all' or comma-separated kinds")
      ->capture_default_str();
  verify->add_option("--seeds", verify_opt.seeds, "Range '1..84' or comma list")
      ->capture_default_str();
  verify->add_option("--functionals", verify_opt.functionals, "Semicolon-separated energy specs")
      ->capture_default_str();
  verify->add_option("--sizes", verify_opt.sizes, "Comma-separated NxD cells")
      ->capture_default_str();
  verify->add_option("--box", verify_opt.box, "Sampling box radius")->capture_default_str();
  verify->add_option("--out", verify_opt.out, "Output directory")->required();

  ProxOptions prox_opt;
  auto* prox = app.add_subcommand("prox", "Single certified proximal step");
  prox->add_option("--config", config_doc, "Flat key=value defaults (flags override)");
  prox->add_option("--functional", prox_opt.functional, "Energy spec")->capture_default_str();
  prox->add_option("--seed", prox_opt.seed, "Instance seed")->capture_default_str();
  prox->add_option("--n-atoms", prox_opt.n_atoms, "Atom count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  prox->add_option("--dim", prox_opt.dim, "Dimension")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  prox->add_option("--box", prox_opt.box, "Sampling box radius")->capture_default_str();
  prox->add_option("--tau", prox_opt.tau, "Step size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  prox->add_option("--initial-point", prox_opt.initial_point, "Single-atom start");
  prox->add_option("--initial", prox_opt.initial_file, "Measure CSV to start from");
  prox->add_option("--out", prox_opt.out, "Output directory")->required();

  GeodesicOptions geo_opt;
  auto* geo = app.add_subcommand("geodesic", "Geometry identities on a seeded instance");
  geo->add_option("--config", config_doc, "Flat key=value defaults (flags override)");
  geo->add_option("--seed", geo_opt.seed, "Instance seed")->capture_default_str();
  geo->add_option("--n-atoms", geo_opt.n_atoms, "Atom count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  geo->add_option("--dim", geo_opt.dim, "Dimension")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  geo->add_option("--box", geo_opt.box, "Sampling box radius")->capture_default_str();
  geo->add_option("--alpha", geo_opt.alpha, "Interpolation parameter")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  geo->add_option("--out", geo_opt.out, "Output directory")->required();

  std::string rerun_manifest, rerun_out;
  auto* rerun = app.add_subcommand("rerun", "Re-execute a saved manifest");
  rerun->add_option("manifest", rerun_manifest, "manifest.json path")->required();
  rerun->add_option("--out", rerun_out, "Output directory")->required();

  try {
    args = apply_config_defaults(std::move(args));
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  }
  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& err) {
    return app.exit(err) == 0 ? kExitOk : kExitUsage;
  }

  if (rerun->parsed()) return run_rerun(rerun_manifest, rerun_out);

  const auto started = std::chrono::steady_clock::now();
  RunContext ctx;
  std::string subcommand;
  int code = kExitOk;
  try {
    if (flow->parsed()) {
      subcommand = "flow";
      ctx.out_dir = flow_opt.out;
      fs::create_directories(ctx.out_dir);
      ctx.argv_echo = {"flow",
                       "--functional", flow_opt.functional,
                       "--seed", std::to_string(flow_opt.seed),
                       "--n-atoms", std::to_string(flow_opt.n_atoms),
                       "--dim", std::to_string(flow_opt.dim),
                       "--box", wgf::format_double(flow_opt.box),
                       "--tau", wgf::format_double(flow_opt.tau),
                       "--steps", std::to_string(flow_opt.steps),
                       "--out", flow_opt.out};
      if (!flow_opt.schedule.empty()) {
        ctx.argv_echo.push_back("--schedule");
        ctx.argv_echo.push_back(flow_opt.schedule);
      }
      if (!flow_opt.initial_point.empty()) {
        ctx.argv_echo.push_back("--initial-point");
        ctx.argv_echo.push_back(flow_opt.initial_point);
      }
      if (!flow_opt.initial_file.empty()) {
        ctx.argv_echo.push_back("--initial");
        ctx.argv_echo.push_back(flow_opt.initial_file);
      }
      code = run_flow(flow_opt, ctx);
    } else if (expf->parsed()) {
      subcommand = "expformula";
      ctx.out_dir = exp_opt.out;
      fs::create_directories(ctx.out_dir);
      ctx.argv_echo = {"expformula",
                       "--functional", exp_opt.functional,
                       "--seed", std::to_string(exp_opt.seed),
                       "--n-atoms", std::to_string(exp_opt.n_atoms),
                       "--dim", std::to_string(exp_opt.dim),
                       "--box", wgf::format_double(exp_opt.box),
                       "--t", wgf::format_double(exp_opt.t),
                       "--n", exp_opt.n_list,
                       "--out", exp_opt.out};
      if (!exp_opt.initial_point.empty()) {
        ctx.argv_echo.push_back("--initial-point");
        ctx.argv_echo.push_back(exp_opt.initial_point);
      }
      if (!exp_opt.initial_file.empty()) {
        ctx.argv_echo.push_back("--initial");
        ctx.argv_echo.push_back(exp_opt.initial_file);
      }
      code = run_expformula(exp_opt, ctx);
    } else if (verify->parsed()) {
      subcommand = "verify";
      ctx.out_dir = verify_opt.out;
      fs::create_directories(ctx.out_dir);
      ctx.argv_echo = {"verify",
                       "--kinds", verify_opt.kinds,
                       "--seeds", verify_opt.seeds,
                       "--functionals", verify_opt.functionals,
                       "--sizes", verify_opt.sizes,
                       "--box", wgf::format_double(verify_opt.box),
                       "--out", verify_opt.out};
      code = run_verify(verify_opt, ctx);
    } else if (prox->parsed()) {
      subcommand = "prox";
      ctx.out_dir = prox_opt.out;
      fs::create_directories(ctx.out_dir);
      ctx.argv_echo = {"prox",
                       "--functional", prox_opt.functional,
                       "--seed", std::to_string(prox_opt.seed),
                       "--n-atoms", std::to_string(prox_opt.n_atoms),
                       "--dim", std::to_string(prox_opt.dim),
                       "--box", wgf::format_double(prox_opt.box),
                       "--tau", wgf::format_double(prox_opt.tau),
                       "--out", prox_opt.out};
      if (!prox_opt.initial_point.empty()) {
        ctx.argv_echo.push_back("--initial-point");
        ctx.argv_echo.push_back(prox_opt.initial_point);
      }
      if (!prox_opt.initial_file.empty()) {
        ctx.argv_echo.push_back("--initial");
        ctx.argv_echo.push_back(prox_opt.initial_file);
      }
      code = run_prox(prox_opt, ctx);
    } else if (geo->parsed()) {
      subcommand = "geodesic";
      ctx.out_dir = geo_opt.out;
      fs::create_directories(ctx.out_dir);
      ctx.argv_echo = {"geodesic",
                       "--seed", std::to_string(geo_opt.seed),
                       "--n-atoms", std::to_string(geo_opt.n_atoms),
                       "--dim", std::to_string(geo_opt.dim),
                       "--box", wgf::format_double(geo_opt.box),
                       "--alpha", wgf::format_double(geo_opt.alpha),
                       "--out", geo_opt.out};
      code = run_geodesic(geo_opt, ctx);
    }
  } catch (const wgf::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    const bool usage = err.kind() == wgf::ErrorKind::InvalidParameter ||
                       err.kind() == wgf::ErrorKind::EmptyInput ||
                       err.kind() == wgf::ErrorKind::DimensionMismatch;
    return usage ? kExitUsage : kExitCheckFailed;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  }

  const double elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
          .count();
  write_manifest(ctx, subcommand, elapsed_ms);
  std::cout << subcommand << ": " << ctx.pass_count << " passed, " << ctx.fail_count
            << " failed -> " << ctx.out_dir << "\n";
  return code;
}

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(std::move(args));
}
