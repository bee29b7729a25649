// tunegraph: generate tunable scale-free graphs and measure degree assortativity.
//
// Exit codes: 0 success, 1 validation failure, 2 usage error, 3 I/O error.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tunegraph/tunegraph.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace tunegraph;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct Common {
  std::string out_dir;
  std::string seed = std::to_string(kDefaultSeed);
  unsigned workers = 1;
  std::vector<std::string> emit{"csv", "json", "svg"};
};

struct ModelFlags {
  std::string model = "tgirg";
  std::size_t n = 10000;
  double tau = 2.8;
  double sigma = 1.0;
  int dim = 2;
  double temperature = 0.0;
  double avg_degree = 15.0;
  double radius = 0.0;
  bool allow_any_sigma = false;
  bool naive = false;
};

struct InputFlags {
  std::string input;
  bool zero_indexed = false;
  std::string ids = "auto";
};

std::uint64_t resolve_seed(const std::string& s) {
  if (s == "random") return std::random_device{}() * 0x100000000ull + std::random_device{}();
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParameterError("seed must be a non-negative integer or 'random'");
  return v;
}

bool emits(const Common& c, const std::string& fmt) {
  return std::find(c.emit.begin(), c.emit.end(), fmt) != c.emit.end();
}

fs::path output_dir(const Common& c) {
  fs::path dir = c.out_dir;
  if (dir.empty()) {
    const char* env = std::getenv("TUNEGRAPH_OUT");
    dir = env && *env ? env : ".";
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failure on " + path.string());
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

template <class T>
void write_views(const fs::path& dir, const std::string& stem, const Common& c, const T& value) {
  if (emits(c, "csv")) write_text(dir / (stem + ".csv"), report::to_csv_string(value));
  if (emits(c, "json")) write_json(dir / (stem + ".json"), report::to_json(value));
  if (emits(c, "svg")) {
    std::ostringstream svg;
    report::write_svg(svg, value);
    write_text(dir / (stem + ".svg"), svg.str());
  }
}

ModelParams model_params(const ModelFlags& f, std::uint64_t seed) {
  ModelParams p;
  const auto m = parse_model(f.model);
  if (!m) throw ParameterError("unknown model '" + f.model + "'");
  p.model = *m;
  p.n = f.n;
  p.tau = f.tau;
  p.sigma = f.sigma;
  p.dim = f.dim;
  p.alpha = alpha_from_temperature(f.temperature);
  p.target_avg_degree = f.avg_degree;
  p.rgg_radius = f.radius;
  p.seed = seed;
  p.allow_any_sigma = f.allow_any_sigma;
  p.validate();
  return p;
}

json params_json(const ModelParams& p) {
  json j{{"model", std::string(to_string(p.model))}, {"n", p.n}, {"seed", p.seed}};
  if (p.model == Model::rgg) {
    j["dim"] = p.dim;
    j["radius"] = p.rgg_radius;
    return j;
  }
  j["tau"] = p.tau;
  j["sigma"] = p.effective_sigma();
  j["target_avg_degree"] = p.target_avg_degree;
  j["allow_any_sigma"] = p.allow_any_sigma;
  if (p.geometric()) {
    j["dim"] = p.dim;
    j["temperature"] = p.temperature();
  }
  return j;
}

struct Instance {
  Graph graph;
  json info;
};

Instance make_instance(const ModelParams& p, const Common& c, bool naive) {
  Instance out;
  const auto start = std::chrono::steady_clock::now();
  GenerateOptions gen;
  gen.workers = c.workers;
  gen.naive = naive;
  if (p.model == Model::rgg) {
    out.graph = generate(p, 1.0, gen).graph;
  } else {
    CalibrationOptions cal;
    cal.generate = gen;
    auto res = calibrate_avg_degree(p, cal);
    out.graph = std::move(res.instance.graph);
    out.info["kernel_scale"] = res.scale;
    out.info["calibration_iterations"] = res.iterations;
    out.info["calibration_converged"] = res.converged;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.info["vertices"] = out.graph.vertex_count();
  out.info["edges"] = out.graph.edge_count();
  out.info["realized_avg_degree"] = out.graph.average_degree();
  out.info["generation_seconds"] = seconds;
  return out;
}

Instance load_input(const InputFlags& in) {
  EdgeListOptions opt;
  opt.one_indexed = !in.zero_indexed;
  if (in.ids == "compact")
    opt.id_mode = IdMode::compact;
  else if (in.ids == "dense")
    opt.id_mode = IdMode::dense;
  auto res = read_edge_list(in.input, opt);
  Instance out;
  out.graph = std::move(res.graph);
  out.info = report::to_json(res.report);
  return out;
}

// Graph for analysis commands: --input if given, else a generated instance.
Instance analysis_graph(const InputFlags& in, const ModelFlags& mf, const Common& c, std::uint64_t seed,
                        json& manifest) {
  if (!in.input.empty()) {
    manifest["input"] = {{"path", in.input}, {"zero_indexed", in.zero_indexed}, {"ids", in.ids}};
    auto g = load_input(in);
    manifest["ingest"] = g.info;
    return g;
  }
  const auto p = model_params(mf, seed);
  manifest["params"] = params_json(p);
  auto g = make_instance(p, c, mf.naive);
  manifest["instance"] = g.info;
  return g;
}

json base_manifest(const std::string& command, const Common& c, std::uint64_t seed,
                   const std::vector<std::string>& argv) {
  return json{{"schema_version", report::kSchemaVersion},
              {"tool", "tunegraph"},
              {"version", TUNEGRAPH_VERSION},
              {"command", command},
              {"seed", seed},
              {"argv", argv},
              {"workers", c.workers},
              {"emit", c.emit}};
}

void add_common(CLI::App* app, Common& c) {
  app->add_option("--out", c.out_dir, "output directory (default: $TUNEGRAPH_OUT or .)");
  app->add_option("--seed", c.seed, "integer seed or 'random'")->capture_default_str();
  app->add_option("--workers", c.workers, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--emit", c.emit, "output formats: csv, json, svg, edge-list")
      ->delimiter(',')
      ->check(CLI::IsMember({"csv", "json", "svg", "edge-list"}))
      ->capture_default_str();
}

void add_model(CLI::App* app, ModelFlags& m) {
  app->add_option("--model", m.model, "rgg | chung_lu | tunable_chung_lu | girg | tgirg")->capture_default_str();
  app->add_option("--n", m.n, "vertex count")->capture_default_str()->check(CLI::PositiveNumber);
  app->add_option("--tau", m.tau, "power-law exponent")->capture_default_str();
  app->add_option("--sigma", m.sigma, "tuning exponent on the smaller weight")->capture_default_str();
  app->add_option("--dim", m.dim, "torus dimension")->capture_default_str();
  app->add_option("--temp", m.temperature, "temperature 1/alpha, 0 = threshold")->capture_default_str();
  app->add_option("--avg-deg", m.avg_degree, "target average degree")->capture_default_str();
  app->add_option("--radius", m.radius, "rgg radius");
  app->add_flag("--allow-any-sigma", m.allow_any_sigma, "allow sigma >= tau - 1");
  app->add_flag("--naive", m.naive, "use the quadratic reference sampler");
}

void add_input(CLI::App* app, InputFlags& in) {
  app->add_option("--input", in.input, "edge list to analyse instead of generating a graph");
  app->add_flag("--zero-indexed", in.zero_indexed, "vertex labels start at 0");
  app->add_option("--ids", in.ids, "auto | compact | dense")
      ->check(CLI::IsMember({"auto", "compact", "dense"}))
      ->capture_default_str();
}

std::vector<double> parse_grid(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ParameterError("bad number '" + tok + "' in list");
    }
  }
  if (out.empty()) throw ParameterError("empty list");
  return out;
}

// ---- validate suites ----

json check(const std::string& name, bool pass, json detail) {
  detail["check"] = name;
  detail["pass"] = pass;
  return detail;
}

json suite_rgg(int dim, std::size_t n, std::uint64_t seed, unsigned workers) {
  json checks = json::array();
  Rng rng(derive_seed(seed, {21}));
  const auto est = theory::monte_carlo_intersection_fraction(dim, 100000, rng);
  const double expect = theory::rgg_expected_intersection_fraction(dim);
  checks.push_back(check("intersection_fraction", std::abs(est.mean - expect) <= 3.0 * est.std_error,
                         {{"dim", dim}, {"estimate", est.mean}, {"std_error", est.std_error}, {"expected", expect}}));
  theory::RggCheckOptions opt;
  opt.seed = seed;
  opt.workers = workers;
  // mean degree 10: (n - 1) (2r)^d = 10
  const double r = 0.5 * std::pow(10.0 / (static_cast<double>(n) - 1.0), 1.0 / dim);
  const auto rep = theory::rgg_conditional_degree_check(n, dim, r, opt);
  checks.push_back(check("neighbor_degree_slope", rep.slope > 0.0 && rep.slope_p_value < 0.01,
                         {{"n", n}, {"radius", r}, {"slope", rep.slope}, {"p_value", rep.slope_p_value}}));
  return checks;
}

json suite_pearson(double tau, std::size_t n, std::size_t replicates, std::uint64_t seed, unsigned workers) {
  json checks = json::array();
  for (double sigma : {0.2, 1.0, 1.6}) {
    ModelParams p;
    p.model = Model::tunable_chung_lu;
    p.n = n;
    p.tau = tau;
    p.sigma = sigma;
    p.allow_any_sigma = true;
    std::size_t negative = 0;
    json values = json::array();
    for (std::size_t r = 0; r < replicates; ++r) {
      p.seed = derive_seed(seed, {31, r});
      CalibrationOptions cal;
      cal.generate.workers = workers;
      const auto g = calibrate_avg_degree(p, cal).instance.graph;
      const auto rho = pearson_assortativity(g);
      values.push_back(report::optional_json(rho));
      if (rho && *rho < 0.0) ++negative;
    }
    checks.push_back(check("pearson_negative", negative == replicates,
                           {{"tau", tau}, {"sigma", sigma}, {"n", n}, {"pearson", values}}));
  }
  return checks;
}

json suite_sampler(std::size_t n, std::size_t replicates, std::uint64_t seed, unsigned workers) {
  json checks = json::array();
  for (double sigma : {0.2, 1.0, 1.6})
    for (double alpha : {kInfinity, 1.43}) {
      ModelParams p;
      p.model = Model::tgirg;
      p.n = n;
      p.sigma = sigma;
      p.alpha = alpha;
      p.seed = seed;
      CalibrationOptions cal;
      cal.generate.workers = workers;
      const double scale = calibrate_avg_degree(p, cal).scale;
      const auto eq = theory::sampler_equivalence_check(p, scale, replicates, workers);
      checks.push_back(check("sampler_equivalence", eq.edge_counts.p_value >= 0.01 && eq.degrees.p_value >= 0.01,
                             {{"sigma", sigma},
                              {"temperature", p.temperature()},
                              {"edge_count_p", eq.edge_counts.p_value},
                              {"degree_p", eq.degrees.p_value},
                              {"naive_mean_edges", eq.naive_mean_edges},
                              {"fast_mean_edges", eq.fast_mean_edges}}));
    }
  return checks;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tunable scale-free graph generator and assortativity toolkit", "tunegraph"};
  app.set_version_flag("--version", TUNEGRAPH_VERSION);
  app.require_subcommand(1);
  std::vector<std::string> args(argv, argv + argc);

  Common common;
  ModelFlags mf;
  InputFlags in;

  auto* gen = app.add_subcommand("generate", "generate a calibrated instance and write it as an edge list");
  add_common(gen, common);
  add_model(gen, mf);

  auto* coeffs = app.add_subcommand("coeffs", "Pearson, Spearman and Kendall assortativity");
  add_common(coeffs, common);
  add_model(coeffs, mf);
  add_input(coeffs, in);
  bool hill = false;
  coeffs->add_flag("--hill", hill, "also report the Hill tail exponent estimate");

  auto* heat = app.add_subcommand("heatmaps", "joint degree distribution and conditional change heatmaps");
  add_common(heat, common);
  add_model(heat, mf);
  add_input(heat, in);
  int buckets = kDefaultBuckets;
  heat->add_option("--buckets", buckets, "buckets per axis")->capture_default_str()->check(CLI::PositiveNumber);

  auto* ccdf = app.add_subcommand("ccdf", "node, edge and conditional degree CCDFs");
  add_common(ccdf, common);
  add_model(ccdf, mf);
  add_input(ccdf, in);
  ccdf->add_option("--buckets", buckets, "buckets per axis")->capture_default_str()->check(CLI::PositiveNumber);
  std::string levels = "0.25,0.5,0.75,1";
  ccdf->add_option("--levels", levels, "conditioning levels in [0, 1]")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "assortativity coefficients over a sigma x tau grid");
  add_common(sweep, common);
  std::string sweep_models = "tunable_chung_lu,tgirg", sigmas = "0.2,0.4,0.6,0.8,1,1.2,1.4,1.6,1.8",
              taus = "2.2,2.4,2.6,2.8";
  std::size_t sweep_n = 50000, replicates = 5;
  int sweep_dim = 2;
  double sweep_temp = 0.0, sweep_avg = 15.0;
  sweep->add_option("--models", sweep_models, "comma-separated models")->capture_default_str();
  sweep->add_option("--sigmas", sigmas, "sigma grid")->capture_default_str();
  sweep->add_option("--taus", taus, "tau list")->capture_default_str();
  sweep->add_option("--n", sweep_n, "vertex count")->capture_default_str()->check(CLI::PositiveNumber);
  sweep->add_option("--replicates", replicates, "instances per cell")->capture_default_str()->check(CLI::Range(2, 100000));
  sweep->add_option("--dim", sweep_dim, "torus dimension")->capture_default_str();
  sweep->add_option("--temp", sweep_temp, "temperature")->capture_default_str();
  sweep->add_option("--avg-deg", sweep_avg, "target average degree")->capture_default_str();

  auto* val = app.add_subcommand("validate", "check theoretical predictions against simulation");
  add_common(val, common);
  std::string suite = "rgg";
  int val_dim = 1;
  double val_tau = 2.2;
  std::size_t val_n = 0, val_reps = 0;
  val->add_option("--suite", suite, "rgg | pearson-negativity | sampler-equivalence")
      ->check(CLI::IsMember({"rgg", "pearson-negativity", "sampler-equivalence"}))
      ->capture_default_str();
  val->add_option("--dim", val_dim, "dimension for the rgg suite")->capture_default_str();
  val->add_option("--tau", val_tau, "tau for the pearson-negativity suite")->capture_default_str();
  val->add_option("--n", val_n, "vertex count (suite default if omitted)");
  val->add_option("--replicates", val_reps, "replicates (suite default if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const std::uint64_t seed = resolve_seed(common.seed);
    const fs::path dir = output_dir(common);
    if (gen->parsed()) {
      const auto p = model_params(mf, seed);
      auto manifest = base_manifest("generate", common, seed, args);
      manifest["params"] = params_json(p);
      auto inst = make_instance(p, common, mf.naive);
      manifest["instance"] = inst.info;
      write_edge_list(inst.graph, (dir / "graph.edges").string());
      manifest["outputs"] = {"graph.edges"};
      write_json(dir / "manifest.json", manifest);
      std::cout << inst.info.dump() << '\n';
      return kExitOk;
    }
    if (coeffs->parsed() || heat->parsed() || ccdf->parsed()) {
      const std::string name = coeffs->parsed() ? "coeffs" : heat->parsed() ? "heatmaps" : "ccdf";
      auto manifest = base_manifest(name, common, seed, args);
      auto inst = analysis_graph(in, mf, common, seed, manifest);
      if (emits(common, "edge-list") && in.input.empty()) write_edge_list(inst.graph, (dir / "graph.edges").string());
      if (coeffs->parsed()) {
        json j = report::to_json(assortativity_report(inst.graph));
        if (hill) {
          const DegreeSequence degrees(inst.graph);
          const auto h = hill_estimator(degrees, default_hill_k(degrees));
          j["hill_tau"] = report::optional_json(h.tau);
          j["hill_k"] = h.k_tail;
        }
        write_json(dir / "coefficients.json", j);
        std::cout << j.dump(2) << '\n';
      } else if (heat->parsed()) {
        const auto joint = joint_degree_histogram(inst.graph, buckets);
        write_views(dir, "joint", common, joint);
        write_views(dir, "conditional", common, conditional_change_heatmap(joint));
      } else {
        const auto curves = degree_ccdf_curves(inst.graph, bucket_scheme(std::max<std::size_t>(inst.graph.max_degree(), 1), buckets),
                                               parse_grid(levels));
        write_views(dir, "ccdf", common, curves);
      }
      write_json(dir / "manifest.json", manifest);
      return kExitOk;
    }
    if (sweep->parsed()) {
      auto manifest = base_manifest("sweep", common, seed, args);
      std::vector<std::string> models;
      {
        std::stringstream ss(sweep_models);
        std::string tok;
        while (std::getline(ss, tok, ',')) models.push_back(tok);
      }
      const auto sigma_grid = parse_grid(sigmas), tau_grid = parse_grid(taus);
      manifest["grid"] = {{"models", models}, {"sigmas", sigma_grid}, {"taus", tau_grid}, {"n", sweep_n},
                          {"replicates", replicates}, {"dim", sweep_dim}, {"temperature", sweep_temp},
                          {"target_avg_degree", sweep_avg}, {"seed", seed}};
      json rows = json::array();
      std::ostringstream csv;
      csv << "model,tau,sigma,replicates,pearson_mean,pearson_sd,spearman_mean,spearman_sd,kendall_mean,kendall_sd,"
             "avg_degree_mean\n";
      for (const auto& name : models)
        for (double tau : tau_grid)
          for (double sigma : sigma_grid) {
            ModelFlags f;
            f.model = name;
            f.n = sweep_n;
            f.tau = tau;
            f.sigma = sigma;
            f.dim = sweep_dim;
            f.temperature = sweep_temp;
            f.avg_degree = sweep_avg;
            f.allow_any_sigma = true;
            std::vector<double> pe, sp, ke, deg;
            for (std::size_t r = 0; r < replicates; ++r) {
              auto p = model_params(f, derive_seed(seed, {41, r}));
              const auto g = make_instance(p, common, false).graph;
              const auto rep = assortativity_report(g);
              if (rep.pearson) pe.push_back(*rep.pearson);
              if (rep.spearman) sp.push_back(*rep.spearman);
              if (rep.kendall) ke.push_back(*rep.kendall);
              deg.push_back(g.average_degree());
            }
            auto m = [](const std::vector<double>& v) -> std::optional<double> {
              if (v.empty()) return std::nullopt;
              return stats::mean(v);
            };
            auto sd = [](const std::vector<double>& v) -> std::optional<double> {
              if (v.size() < 2) return std::nullopt;
              return stats::stddev(v);
            };
            rows.push_back({{"model", name},
                            {"tau", tau},
                            {"sigma", sigma},
                            {"replicates", replicates},
                            {"pearson_mean", report::optional_json(m(pe))},
                            {"pearson_sd", report::optional_json(sd(pe))},
                            {"spearman_mean", report::optional_json(m(sp))},
                            {"spearman_sd", report::optional_json(sd(sp))},
                            {"kendall_mean", report::optional_json(m(ke))},
                            {"kendall_sd", report::optional_json(sd(ke))},
                            {"avg_degree_mean", stats::mean(deg)}});
            csv << name << ',' << report::format_number(tau) << ',' << report::format_number(sigma) << ','
                << replicates << ',' << report::format_cell(m(pe)) << ',' << report::format_cell(sd(pe)) << ','
                << report::format_cell(m(sp)) << ',' << report::format_cell(sd(sp)) << ','
                << report::format_cell(m(ke)) << ',' << report::format_cell(sd(ke)) << ','
                << report::format_number(stats::mean(deg)) << '\n';
            std::cerr << name << " tau=" << tau << " sigma=" << sigma << " done\n";
          }
      if (emits(common, "csv")) write_text(dir / "sweep.csv", csv.str());
      if (emits(common, "json"))
        write_json(dir / "sweep.json", {{"schema_version", report::kSchemaVersion}, {"kind", "sweep"}, {"rows", rows}});
      write_json(dir / "manifest.json", manifest);
      return kExitOk;
    }
    if (val->parsed()) {
      auto manifest = base_manifest("validate", common, seed, args);
      json checks;
      if (suite == "rgg") {
        checks = suite_rgg(val_dim, val_n ? val_n : 10000, seed, common.workers);
      } else if (suite == "pearson-negativity") {
        checks = suite_pearson(val_tau, val_n ? val_n : 10000, val_reps ? val_reps : 10, seed, common.workers);
      } else {
        checks = suite_sampler(val_n ? val_n : 2000, val_reps ? val_reps : 50, seed, common.workers);
      }
      bool pass = true;
      for (const auto& c : checks) pass = pass && c["pass"].get<bool>();
      const json result{{"schema_version", report::kSchemaVersion}, {"kind", "validation"}, {"suite", suite},
                        {"seed", seed}, {"pass", pass}, {"checks", checks}};
      write_json(dir / "validation.json", result);
      write_json(dir / "manifest.json", manifest);
      std::cout << result.dump(2) << '\n';
      return pass ? kExitOk : kExitValidation;
    }
  } catch (const ParameterError& e) {
    std::cerr << "tunegraph: usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "tunegraph: I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const GraphError& e) {
    std::cerr << "tunegraph: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
