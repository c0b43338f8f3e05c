#include "cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdint>
#include <iomanip>
#include <optional>
#include <sstream>

#include "otbdp/breakdown.hpp"
#include "otbdp/curves.hpp"
#include "otbdp/depth.hpp"
#include "otbdp/io.hpp"
#include "otbdp/parallel.hpp"
#include "otbdp/rng.hpp"
#include "otbdp/robustness.hpp"
#include "otbdp/sdot.hpp"
#include "otbdp/trimming.hpp"

namespace otbdp::cli {
namespace {

using nlohmann::json;

struct RunConfig {
  std::uint64_t seed = 1;
  std::size_t budget = 1'000'000;
  double tolerance = 1e-3;
  std::size_t max_iterations = 500;
  std::string out;
  std::string log_level = "warn";
  unsigned threads = 0;
};

struct Args {
  RunConfig run;
  std::string reference;
  std::string atoms;
  std::string map;
  std::string u;
  std::string points;
  std::string contaminate;
  std::string rgrid = "10,20,40,80";
  double delta = 0.1;
  std::string kind = "both";
  std::string dims = "1,2,3,5,10";
  std::string n = "asymptotic";
  std::size_t alphas = 201;
  std::string mode;
  double beta = 0.0;
};

void add_run_flags(CLI::App* app, RunConfig& run, bool solver) {
  app->add_option("--seed", run.seed, "RNG seed");
  app->add_option("--budget", run.budget, "Monte-Carlo sample budget");
  if (solver) {
    app->add_option("--tol", run.tolerance, "cell mass tolerance");
    app->add_option("--max-iter", run.max_iterations, "solver iteration cap");
  }
  app->add_option("--out", run.out, "output path (stdout when omitted)");
  app->add_option("--threads", run.threads, "worker thread cap (0 = hardware)");
  app->add_option("--log-level", run.log_level, "trace|debug|info|warn|error|off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));
}

json config_json(const std::string& command, const Args& a) {
  json c;
  c["command"] = command;
  c["seed"] = a.run.seed;
  c["budget"] = a.run.budget;
  c["tolerance"] = a.run.tolerance;
  c["max_iterations"] = a.run.max_iterations;
  c["out"] = a.run.out;
  c["log_level"] = a.run.log_level;
  c["threads"] = a.run.threads;
  const auto put = [&](const char* key, const std::string& v) {
    if (!v.empty()) c[key] = v;
  };
  put("reference", a.reference);
  put("atoms", a.atoms);
  put("map", a.map);
  put("u", a.u);
  put("points", a.points);
  put("contaminate", a.contaminate);
  put("mode", a.mode);
  if (command == "bdp empirical") {
    c["delta"] = a.delta;
    c["rgrid"] = a.rgrid;
  }
  if (command == "bdp curve") {
    c["kind"] = a.kind;
    c["dims"] = a.dims;
    c["n"] = a.n;
    c["alphas"] = a.alphas;
  }
  if (command == "trim") c["beta"] = a.beta;
  return c;
}

SolveConfig solve_config(const RunConfig& run) {
  SolveConfig s;
  s.mass_tolerance = run.tolerance;
  s.max_iterations = run.max_iterations;
  s.mc_budget = run.budget;
  s.seed = run.seed;
  return s;
}

void emit(const RunConfig& run, std::ostream& out, const std::string& text) {
  if (run.out.empty()) {
    out << text;
  } else {
    write_text(run.out, text);
  }
}

void emit_json(const RunConfig& run, std::ostream& out, json doc, json config) {
  doc["schema_version"] = kSchemaVersion;
  doc["config"] = std::move(config);
  emit(run, out, doc.dump(2) + "\n");
}

std::string csv_config_header(const json& config) { return "# config " + config.dump() + "\n"; }

json point_json(std::span<const double> p) { return std::vector<double>(p.begin(), p.end()); }

ReferenceMeasure reference_of(const Args& a) { return ReferenceMeasure::parse(a.reference); }

Point point_arg(const std::string& text, std::size_t dim) {
  auto p = parse_doubles(text);
  require_dim(p, dim);
  return p;
}

void configure_logging(const RunConfig& run) {
  auto logger = spdlog::get("otbdp");
  if (!logger) logger = spdlog::stderr_logger_st("otbdp");
  logger->set_level(spdlog::level::from_str(run.log_level));
  spdlog::set_default_logger(logger);
  set_max_threads(run.threads);
}

void run_sdot_solve(const Args& a, std::ostream& out) {
  const auto ref = reference_of(a);
  const auto target = read_atoms(a.atoms);
  spdlog::info("solving {} with {} atoms, budget {}", a.reference, target.size(), a.run.budget);
  const auto map = solve(ref, target, solve_config(a.run));
  spdlog::info("converged: residual {} after {} iterations", map.residual(), map.stats().iterations);
  auto doc = json::parse(map_to_json(map));
  doc["stats"] = {{"iterations", map.stats().iterations},
                  {"quasi_newton_steps", map.stats().quasi_newton_steps},
                  {"coordinate_sweeps", map.stats().coordinate_sweeps},
                  {"evaluations", map.stats().evaluations},
                  {"validation_residual", map.stats().validation_residual}};
  emit_json(a.run, out, std::move(doc), config_json("sdot solve", a));
}

void run_sdot_map(const Args& a, std::ostream& out) {
  const auto map = map_from_json(read_text(a.map));
  const std::size_t d = map.reference().dim();
  PointSet queries(d);
  if (!a.u.empty()) queries.push_back(point_arg(a.u, d));
  if (!a.points.empty()) {
    const auto pts = read_atoms(a.points).atoms();
    if (pts.dim() != d) throw Error(ErrorCode::DimensionMismatch, "query points have the wrong dimension");
    for (std::size_t i = 0; i < pts.size(); ++i) queries.push_back(pts[i]);
  }
  if (queries.size() == 0) throw Error(ErrorCode::InvalidArgument, "give --u or --points");
  json rows = json::array();
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const auto cell = map.classify(queries[i]);
    rows.push_back({{"u", point_json(queries[i])}, {"cell", cell}, {"image", point_json(map.target().atom(cell))}});
  }
  emit_json(a.run, out, {{"transport", rows}}, config_json("sdot map", a));
}

void run_sdot_ranks(const Args& a, std::ostream& out) {
  const auto map = map_from_json(read_text(a.map));
  const auto r = ranks(map, a.run.budget, a.run.seed);
  json rows = json::array();
  for (std::size_t i = 0; i < r.size(); ++i) rows.push_back(point_json(r[i]));
  emit_json(a.run, out, {{"ranks", rows}}, config_json("sdot ranks", a));
}

void run_depth(const Args& a, std::ostream& out) {
  const auto ref = reference_of(a);
  const auto u = point_arg(a.u, ref.dim());
  const auto hd = depth(ref, u);
  json doc{{"depth", hd.value}, {"direction", hd.direction}, {"approximate", hd.approximate}};
  emit_json(a.run, out, std::move(doc), config_json("depth", a));
}

void run_bdp_point(const Args& a, std::ostream& out) {
  const auto ref = reference_of(a);
  const auto target = read_atoms(a.atoms);
  const auto u = point_arg(a.u, ref.dim());
  const auto r = breakdown_point(ref, target, u);
  json doc{{"bdp", r.bdp}, {"achieving_subset", r.achieving_subset}, {"depth", r.depth_used}};
  doc["empirical_form"] = r.empirical_form ? json(*r.empirical_form) : json(nullptr);
  emit_json(a.run, out, std::move(doc), config_json("bdp point", a));
}

void run_bdp_curve(const Args& a, std::ostream& out) {
  CurveSpec spec;
  if (a.kind == "spherical") {
    spec.kinds = {ReferenceKind::SphericalUniform};
  } else if (a.kind == "ball") {
    spec.kinds = {ReferenceKind::UniformBall};
  }
  spec.dims = parse_indices(a.dims);
  spec.alphas = alpha_grid(a.alphas);
  if (a.n != "asymptotic") {
    const auto n = parse_indices(a.n);
    if (n.size() != 1) throw Error(ErrorCode::ParseError, "--n takes one integer or 'asymptotic'");
    spec.n = n.front();
  }
  std::ostringstream csv;
  csv << csv_config_header(config_json("bdp curve", a));
  emit_figure1(csv, spec);
  emit(a.run, out, csv.str());
}

void run_bdp_empirical(const Args& a, std::ostream& out) {
  const auto ref = reference_of(a);
  const auto target = read_atoms(a.atoms);
  const auto u = point_arg(a.u, ref.dim());
  const auto contaminated = parse_indices(a.contaminate);
  DivergenceConfig cfg;
  cfg.delta = a.delta;
  cfg.radii = parse_doubles(a.rgrid);
  cfg.solve = solve_config(a.run);
  cfg.integral_budget = a.run.budget;
  cfg.integral_seed = derive_seed(a.run.seed, 0x1e9a1);
  const auto p = divergence_experiment(ref, target, u, contaminated, cfg);

  double mass = 0.0;
  for (auto i : contaminated) mass += target.weight(i);
  const double hd = depth(ref, u).value;
  const auto config = config_json("bdp empirical", a);

  std::ostringstream csv;
  csv << csv_config_header(config) << "radius,integral\n" << std::setprecision(17);
  for (std::size_t k = 0; k < p.radii.size(); ++k) csv << p.radii[k] << ',' << p.integrals[k] << '\n';
  json verdict{{"contaminated_mass", mass},
               {"depth", hd},
               {"predicted_breakdown", mass >= hd - kThresholdSlack},
               {"diverges", p.diverges},
               {"bounded", p.bounded},
               {"slope", p.slope},
               {"slope_threshold", p.slope_threshold},
               {"ball_mass", p.ball_mass},
               {"delta", p.delta},
               {"direction", p.direction},
               {"radii", p.radii},
               {"integrals", p.integrals},
               {"schema_version", kSchemaVersion},
               {"config", config}};
  if (a.run.out.empty()) {
    out << csv.str();
  } else {
    write_text(a.run.out, csv.str());
  }
  out << verdict.dump(2) << "\n";
}

void run_trim(const Args& a, std::ostream& out) {
  const auto map = map_from_json(read_text(a.map));
  const auto r = a.mode == "cube" ? trim_cube(map, a.beta, a.run.budget, a.run.seed)
                                  : trim_depth(map, a.beta, a.run.budget, a.run.seed);
  json doc{{"kept_indices", r.kept_indices}, {"trimmed_mean", r.trimmed_mean}, {"h_value", r.h_value}, {"beta", r.beta}};
  emit_json(a.run, out, std::move(doc), config_json("trim", a));
}

void print_error(std::ostream& err, const std::string& code, const std::string& message) {
  err << json{{"error", code}, {"message", message}}.dump() << "\n";
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semi-discrete optimal transport quantiles: depth, breakdown points and trimmed means", "otbdp"};
  app.require_subcommand(1);
  Args a;
  std::optional<void (*)(const Args&, std::ostream&)> command;
  const auto bind = [&](CLI::App* sub, void (*fn)(const Args&, std::ostream&)) {
    sub->callback([&command, fn] { command = fn; });
  };

  auto* sdot = app.add_subcommand("sdot", "semi-discrete transport maps");
  sdot->require_subcommand(1);
  auto* solve_cmd = sdot->add_subcommand("solve", "solve for the adapted weight vector");
  solve_cmd->add_option("--reference", a.reference, "cube:d | ball:d | sphunif:d | gauss:d")->required();
  solve_cmd->add_option("--atoms", a.atoms, "atoms file (.csv or .json)")->required();
  add_run_flags(solve_cmd, a.run, true);
  bind(solve_cmd, run_sdot_solve);

  auto* map_cmd = sdot->add_subcommand("map", "evaluate a solved map at points");
  map_cmd->add_option("--map", a.map, "map.json from 'sdot solve'")->required();
  map_cmd->add_option("--u", a.u, "single point, comma separated");
  map_cmd->add_option("--points", a.points, "CSV of query points");
  add_run_flags(map_cmd, a.run, false);
  bind(map_cmd, run_sdot_map);

  auto* ranks_cmd = sdot->add_subcommand("ranks", "OT ranks (cell barycentres)");
  ranks_cmd->add_option("--map", a.map, "map.json from 'sdot solve'")->required();
  add_run_flags(ranks_cmd, a.run, false);
  bind(ranks_cmd, run_sdot_ranks);

  auto* depth_cmd = app.add_subcommand("depth", "halfspace depth of a point");
  depth_cmd->add_option("--reference", a.reference, "cube:d | ball:d | sphunif:d | gauss:d")->required();
  depth_cmd->add_option("--u", a.u, "point, comma separated")->required();
  add_run_flags(depth_cmd, a.run, false);
  bind(depth_cmd, run_depth);

  auto* bdp = app.add_subcommand("bdp", "breakdown points");
  bdp->require_subcommand(1);
  auto* point_cmd = bdp->add_subcommand("point", "breakdown point of Q(u)");
  point_cmd->add_option("--reference", a.reference, "cube:d | ball:d | sphunif:d | gauss:d")->required();
  point_cmd->add_option("--atoms", a.atoms, "atoms file (.csv or .json)")->required();
  point_cmd->add_option("--u", a.u, "point, comma separated")->required();
  add_run_flags(point_cmd, a.run, false);
  bind(point_cmd, run_bdp_point);

  auto* curve_cmd = bdp->add_subcommand("curve", "breakdown curves as CSV");
  curve_cmd->add_option("--kind", a.kind, "spherical | ball | both")->check(CLI::IsMember({"spherical", "ball", "both"}));
  curve_cmd->add_option("--dims", a.dims, "comma-separated dimensions");
  curve_cmd->add_option("--n", a.n, "'asymptotic' or a sample size");
  curve_cmd->add_option("--alphas", a.alphas, "number of alpha grid points")->check(CLI::Range(2, 1'000'000));
  add_run_flags(curve_cmd, a.run, false);
  bind(curve_cmd, run_bdp_curve);

  auto* emp_cmd = bdp->add_subcommand("empirical", "ray-contamination divergence experiment");
  emp_cmd->add_option("--reference", a.reference, "cube:d | ball:d | sphunif:d | gauss:d")->required();
  emp_cmd->add_option("--atoms", a.atoms, "atoms file (.csv or .json)")->required();
  emp_cmd->add_option("--u", a.u, "interior point, comma separated")->required();
  emp_cmd->add_option("--contaminate", a.contaminate, "contaminated atom indices (0-based)")->required();
  emp_cmd->add_option("--delta", a.delta, "ball radius around u");
  emp_cmd->add_option("--rgrid", a.rgrid, "ray radii in units of the atom diameter");
  add_run_flags(emp_cmd, a.run, true);
  bind(emp_cmd, run_bdp_empirical);

  auto* trim_cmd = app.add_subcommand("trim", "OT trimmed means");
  trim_cmd->add_option("--mode", a.mode, "cube | depth")->required()->check(CLI::IsMember({"cube", "depth"}));
  trim_cmd->add_option("--beta", a.beta, "trimming proportion")->required();
  trim_cmd->add_option("--map", a.map, "map.json from 'sdot solve'")->required();
  add_run_flags(trim_cmd, a.run, false);
  bind(trim_cmd, run_trim);

  std::vector<const char*> argv{"otbdp"};
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "usage error: " << e.what() << "\n";
    return 2;
  }
  if (!command) {
    err << "usage error: no command given\n";
    return 2;
  }

  try {
    configure_logging(a.run);
    (*command)(a, out);
  } catch (const Error& e) {
    print_error(err, std::string(to_string(e.code())), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error(err, "InternalError", e.what());
    return 1;
  }
  return 0;
}

}  // namespace otbdp::cli
