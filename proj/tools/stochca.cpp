// stochca command-line driver. Exit codes: 0 success, 2 validation error,
// 3 runtime failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "stochca/cca.hpp"
#include "stochca/decompose.hpp"
#include "stochca/error.hpp"
#include "stochca/experiments.hpp"
#include "stochca/export.hpp"
#include "stochca/kernels.hpp"
#include "stochca/parallel.hpp"
#include "stochca/plut_io.hpp"
#include "stochca/rules.hpp"
#include "stochca/sca.hpp"

namespace {

using namespace stochca;

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

struct Common {
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  std::string out = "-";
  std::string isa = "auto";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  cmd->add_option("--threads", c.threads, "Worker threads (0 = all cores)")
      ->capture_default_str();
  cmd->add_option("--out", c.out, "Output path ('-' for stdout)")->capture_default_str();
  cmd->add_option("--isa", c.isa, "Kernel variant: auto | scalar | avx2")->capture_default_str();
}

// Output sink: a file opened in binary mode, or stdout.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void finish() {
    stream().flush();
    if (!stream()) throw std::runtime_error("write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

Metadata base_metadata(std::string_view command, const Common& c) {
  return {{"command", std::string(command)},
          {"seed", std::to_string(c.seed)},
          {"isa", std::string(kernels::isa_name(kernels::active_isa()))}};
}

// Format from --format, else from the output extension, else `fallback`.
std::string resolve_format(const std::string& requested, const std::string& out,
                           const std::string& fallback) {
  if (!requested.empty()) return requested;
  if (out != "-") {
    std::string ext = std::filesystem::path(out).extension().string();
    if (!ext.empty()) return ext.substr(1);
  }
  return fallback;
}

void apply_isa(const Common& c) {
  if (c.isa == "auto") return;
  kernels::set_active_isa(kernels::parse_isa(c.isa));
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string rule;
  std::size_t cells = 64;
  std::size_t steps = 64;
  std::string init = "uniform";
  std::string format;
};

void run_simulate(const Common& c, const SimulateArgs& a) {
  const Plut plut = parse_rule_spec(a.rule);
  const Geometry geometry(a.cells, plut.radius());
  const Configuration init =
      config_random(geometry, plut.states(), parse_init_mode(a.init), c.seed);
  const SpaceTimeDiagram diagram =
      sca_evolve(plut, init, a.steps, RngSeed(c.seed, {streams::kSimulation}));

  const std::string format = resolve_format(a.format, c.out, "csv");
  Sink sink(c.out);
  if (format == "pbm") {
    write_pbm(sink.stream(), diagram);
  } else if (format == "pgm") {
    write_pgm(sink.stream(), diagram);
  } else if (format == "csv") {
    Metadata meta = base_metadata("simulate", c);
    meta.insert(meta.end(), {{"rule", a.rule},
                             {"cells", std::to_string(a.cells)},
                             {"steps", std::to_string(a.steps)},
                             {"init", a.init}});
    write_metadata(sink.stream(), meta);
    write_diagram_csv(sink.stream(), diagram);
  } else {
    throw ValidationError("unknown format '" + format + "' (pbm | pgm | csv)");
  }
  sink.finish();
}

struct CcaRunArgs {
  std::string rule;
  std::size_t cells = 64;
  std::size_t steps = 64;
  std::string init = "uniform";
  std::string format;
  std::size_t state = 1;
};

void run_cca(const Common& c, const CcaRunArgs& a) {
  const Plut plut = parse_rule_spec(a.rule);
  const Geometry geometry(a.cells, plut.radius());
  const Configuration init =
      config_random(geometry, plut.states(), parse_init_mode(a.init), c.seed);
  const ContinuousTrajectory trajectory = cca_evolve(plut, init, a.steps);

  const std::string format = resolve_format(a.format, c.out, "csv");
  Sink sink(c.out);
  if (format == "pgm") {
    if (a.state >= plut.states()) throw ValidationError("--state exceeds the number of states");
    write_pgm(sink.stream(), trajectory, a.state);
  } else if (format == "csv") {
    Metadata meta = base_metadata("cca-run", c);
    meta.insert(meta.end(), {{"rule", a.rule},
                             {"cells", std::to_string(a.cells)},
                             {"steps", std::to_string(a.steps)},
                             {"init", a.init}});
    write_metadata(sink.stream(), meta);
    write_trajectory_csv(sink.stream(), trajectory);
  } else {
    throw ValidationError("unknown format '" + format + "' (pgm | csv)");
  }
  sink.finish();
}

struct DecomposeArgs {
  std::string plut_path;
  std::string rule;
};

void run_decompose(const Common& c, const DecomposeArgs& a) {
  if (a.plut_path.empty() == a.rule.empty())
    throw ValidationError("give exactly one of --plut and --rule");
  const Plut plut = a.plut_path.empty() ? parse_rule_spec(a.rule) : read_plut_file(a.plut_path);
  const Decomposition d = greedy_decompose(plut);

  nlohmann::json out = nlohmann::json::array();
  for (const auto& comp : d.components) {
    nlohmann::json entry;
    entry["alpha"] = comp.alpha;
    std::vector<int> lut(comp.lut.outputs().begin(), comp.lut.outputs().end());
    entry["lut"] = lut;
    if (plut.states() == 2 && plut.radius() == 1) entry["eca_number"] = lut_number(comp.lut).value();
    out.push_back(std::move(entry));
  }
  Sink sink(c.out);
  sink.stream() << out.dump(2) << '\n';
  sink.finish();
}

struct DAlphaArgs {
  int rule = 0;
  double alpha_min = 0.9;
  double alpha_max = 1.0;
  std::size_t points = 101;
  std::size_t cells = 69;
  std::size_t steps = 69;
  std::string metric = "tv";
};

void run_dalpha_cmd(const Common& c, const DAlphaArgs& a) {
  const auto alphas = linear_grid(a.alpha_min, a.alpha_max, a.points);
  const DAlphaCurve curve = run_dalpha(EcaNumber(a.rule), alphas, a.cells, a.steps, c.seed,
                                       parse_metric(a.metric), resolve_threads(c.threads));
  Sink sink(c.out);
  Metadata meta = base_metadata("dalpha", c);
  meta.insert(meta.end(), {{"rule", std::to_string(a.rule)},
                           {"cells", std::to_string(a.cells)},
                           {"steps", std::to_string(a.steps)},
                           {"metric", a.metric}});
  write_metadata(sink.stream(), meta);
  sink.stream() << "alpha,D\n";
  for (std::size_t i = 0; i < curve.alphas.size(); ++i)
    sink.stream() << fmt(curve.alphas[i]) << ',' << fmt(curve.values[i]) << '\n';
  sink.finish();
}

struct ClassifyArgs {
  std::vector<int> rules;
  double alpha_min = 0.9;
  std::size_t points = 11;
  std::size_t cells = 69;
  std::size_t steps = 69;
  std::string metric = "tv";
  ClassifyThresholds thresholds;
  bool compare = false;
};

void run_classify(const Common& c, const ClassifyArgs& a) {
  std::vector<int> rules = a.rules;
  if (rules.empty())
    for (int r = 0; r < 256; ++r) rules.push_back(r);
  const auto alphas = linear_grid(a.alpha_min, 1.0, a.points);
  const DistanceMetric metric = parse_metric(a.metric);
  const std::size_t threads = resolve_threads(c.threads);

  Sink sink(c.out);
  Metadata meta = base_metadata("classify-aca", c);
  meta.insert(meta.end(), {{"cells", std::to_string(a.cells)},
                           {"steps", std::to_string(a.steps)},
                           {"alpha_min", fmt(a.alpha_min)},
                           {"points", std::to_string(a.points)},
                           {"metric", a.metric},
                           {"theta_flat", fmt(a.thresholds.flat)},
                           {"theta_drop", fmt(a.thresholds.drop_fraction)},
                           {"theta_noise", std::to_string(a.thresholds.noise)}});
  write_metadata(sink.stream(), meta);
  sink.stream() << "rule,class,max_d,last_drop,sign_changes";
  if (a.compare) sink.stream() << ",reference,match";
  sink.stream() << '\n';

  std::size_t matches = 0;
  for (int r : rules) {
    const EcaNumber rule(r);
    const DAlphaCurve curve = run_dalpha(rule, alphas, a.cells, a.steps, c.seed, metric, threads);
    const AcaClass cls = classify_aca(curve, a.thresholds);
    double max_d = 0.0;
    for (double v : curve.values) max_d = std::max(max_d, v);
    const double drop = curve.values[curve.values.size() - 2] - curve.values.back();
    sink.stream() << r << ',' << aca_class_name(cls) << ',' << fmt(max_d) << ',' << fmt(drop)
                  << ',' << derivative_sign_changes(curve.values);
    if (a.compare) {
      const AcaClass ref = reference_aca_class(rule);
      matches += ref == cls;
      sink.stream() << ',' << aca_class_name(ref) << ',' << (ref == cls ? 1 : 0);
    }
    sink.stream() << '\n';
  }
  if (a.compare)
    std::cerr << "agreement with reference table: " << matches << " / " << rules.size() << '\n';
  sink.finish();
}

struct C3Args {
  C3Options options;
  std::string mode = "cca";
};

void run_c3(const Common& c, C3Args a) {
  a.options.mode = parse_c3_mode(a.mode);
  a.options.seed = c.seed;
  a.options.threads = resolve_threads(c.threads);
  const C3Summary s = run_c3_convergence(a.options);

  Sink sink(c.out);
  Metadata meta = base_metadata("c3-convergence", c);
  meta.insert(meta.end(), {{"eta", fmt(a.options.eta)},
                           {"cells", std::to_string(a.options.cells)},
                           {"ensemble", std::to_string(a.options.ensemble)},
                           {"mode", a.mode},
                           {"runs_per_ic", std::to_string(a.options.runs_per_ic)},
                           {"epsilon", fmt(a.options.epsilon)},
                           {"step_cap", std::to_string(s.step_cap)},
                           {"mean_steps", fmt(s.mean_steps)},
                           {"success_rate", fmt(s.success_rate)},
                           {"non_converged", std::to_string(s.non_converged)}});
  write_metadata(sink.stream(), meta);
  sink.stream() << "ic,ones,majority,runs,converged,correct,mean_steps\n";
  for (const C3Record& r : s.records) {
    sink.stream() << r.ic << ',' << r.ones << ','
                  << (r.majority ? std::to_string(*r.majority) : std::string("tie")) << ','
                  << r.runs << ',' << r.converged << ',' << r.correct << ','
                  << fmt(r.mean_steps) << '\n';
  }
  sink.finish();
}

struct TraceArgs {
  double eta = 0.1;
  std::size_t cells = 29;
  std::size_t per_side = 5;
  std::size_t steps = 200;
};

void run_trace(const Common& c, const TraceArgs& a) {
  const auto traces =
      run_c3_traces(a.eta, a.cells, a.per_side, a.steps, c.seed, resolve_threads(c.threads));
  Sink sink(c.out);
  Metadata meta = base_metadata("c3-trace", c);
  meta.insert(meta.end(), {{"eta", fmt(a.eta)},
                           {"cells", std::to_string(a.cells)},
                           {"per_side", std::to_string(a.per_side)},
                           {"steps", std::to_string(a.steps)}});
  write_metadata(sink.stream(), meta);
  sink.stream() << "ic,initial_density,t,density\n";
  for (const auto& tr : traces)
    for (std::size_t t = 0; t < tr.density.size(); ++t)
      sink.stream() << tr.ic << ',' << fmt(tr.initial_density) << ',' << t << ','
                    << fmt(tr.density[t]) << '\n';
  sink.finish();
}

struct GridArgs {
  GridOptions options;
  bool paper_scale = false;
};

void run_grid(const Common& c, GridArgs a) {
  if (a.paper_scale) {
    a.options.resolution = 101;
    a.options.runs = 100;
  }
  a.options.seed = c.seed;
  a.options.threads = resolve_threads(c.threads);
  const auto stats = run_totalistic_grid(a.options);

  Sink sink(c.out);
  Metadata meta = base_metadata("totalistic-grid", c);
  meta.insert(meta.end(), {{"resolution", std::to_string(a.options.resolution)},
                           {"cells", std::to_string(a.options.cells)},
                           {"steps", std::to_string(a.options.steps)},
                           {"runs", std::to_string(a.options.runs)},
                           {"normalization", "differing cells / (M (T+1)); final row / M"}});
  write_metadata(sink.stream(), meta);
  sink.stream() << "p1,p2,delta_min,delta_mean,delta_max,final_min,final_mean,final_max\n";
  for (const GridStats& g : stats) {
    sink.stream() << fmt(g.p1) << ',' << fmt(g.p2) << ',' << fmt(g.delta_min) << ','
                  << fmt(g.delta_mean) << ',' << fmt(g.delta_max) << ',' << fmt(g.final_min)
                  << ',' << fmt(g.final_mean) << ',' << fmt(g.final_max) << '\n';
  }
  sink.finish();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic and continuous cellular automata toolkit"};
  app.set_version_flag("--version", STOCHCA_VERSION);
  app.require_subcommand(1);

  Common common;

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Sample an SCA space-time diagram");
  add_common(simulate, common);
  simulate->add_option("--rule", sim.rule, "Rule spec: eca:N, aaca:N:a, c3:eta, "
                                           "totalistic:p1:p2, file:path")->required();
  simulate->add_option("-M,--cells", sim.cells, "Ring size")->capture_default_str();
  simulate->add_option("-T,--steps", sim.steps, "Time steps")->capture_default_str();
  simulate->add_option("--init", sim.init, "uniform | density-balanced")->capture_default_str();
  simulate->add_option("--format", sim.format, "pbm | pgm | csv (default: from --out)");

  CcaRunArgs cca;
  auto* cca_run = app.add_subcommand("cca-run", "Evolve the CCA of a rule");
  add_common(cca_run, common);
  cca_run->add_option("--rule", cca.rule, "Rule spec (see simulate)")->required();
  cca_run->add_option("-M,--cells", cca.cells, "Ring size")->capture_default_str();
  cca_run->add_option("-T,--steps", cca.steps, "Time steps")->capture_default_str();
  cca_run->add_option("--init", cca.init, "uniform | density-balanced")->capture_default_str();
  cca_run->add_option("--format", cca.format, "pgm | csv (default: from --out)");
  cca_run->add_option("--state", cca.state, "State shown in PGM output")->capture_default_str();

  DecomposeArgs dec;
  auto* decompose = app.add_subcommand("decompose", "Greedy decomposition of a pLUT into LUTs");
  add_common(decompose, common);
  decompose->add_option("--plut", dec.plut_path, "pLUT JSON file");
  decompose->add_option("--rule", dec.rule, "Rule spec instead of a file");

  DAlphaArgs da;
  auto* dalpha = app.add_subcommand("dalpha", "Distance curve D(alpha) of an alpha-async ECA");
  add_common(dalpha, common);
  dalpha->add_option("--rule", da.rule, "ECA number")->required()->check(CLI::Range(0, 255));
  dalpha->add_option("--alpha-min", da.alpha_min)->capture_default_str();
  dalpha->add_option("--alpha-max", da.alpha_max)->capture_default_str();
  dalpha->add_option("--points", da.points, "Grid points")->capture_default_str();
  dalpha->add_option("-M,--cells", da.cells)->capture_default_str();
  dalpha->add_option("-T,--steps", da.steps)->capture_default_str();
  dalpha->add_option("--metric", da.metric, "tv | euclidean")->capture_default_str();

  ClassifyArgs cl;
  auto* classify = app.add_subcommand("classify-aca", "Classify alpha-async ECAs by D(alpha)");
  add_common(classify, common);
  classify->add_option("--rules", cl.rules, "ECA numbers (default: all 256)")
      ->delimiter(',')
      ->check(CLI::Range(0, 255));
  classify->add_option("--alpha-min", cl.alpha_min)->capture_default_str();
  classify->add_option("--points", cl.points)->capture_default_str();
  classify->add_option("-M,--cells", cl.cells)->capture_default_str();
  classify->add_option("-T,--steps", cl.steps)->capture_default_str();
  classify->add_option("--metric", cl.metric)->capture_default_str();
  classify->add_option("--theta-flat", cl.thresholds.flat)->capture_default_str();
  classify->add_option("--theta-drop", cl.thresholds.drop_fraction)->capture_default_str();
  classify->add_option("--theta-noise", cl.thresholds.noise)->capture_default_str();
  classify->add_flag("--compare", cl.compare, "Add the reference table class per rule");

  C3Args c3;
  auto* c3_conv = app.add_subcommand("c3-convergence", "C3 density classification ensemble");
  add_common(c3_conv, common);
  c3_conv->add_option("--eta", c3.options.eta)->capture_default_str();
  c3_conv->add_option("-M,--cells", c3.options.cells)->capture_default_str();
  c3_conv->add_option("--ensemble", c3.options.ensemble)->capture_default_str();
  c3_conv->add_option("--mode", c3.mode, "cca | sca")->capture_default_str();
  c3_conv->add_option("--runs", c3.options.runs_per_ic, "SCA runs per IC")->capture_default_str();
  c3_conv->add_option("--step-cap", c3.options.step_cap, "0 = 50 * M")->capture_default_str();
  c3_conv->add_option("--epsilon", c3.options.epsilon)->capture_default_str();

  TraceArgs tr;
  auto* c3_trace = app.add_subcommand("c3-trace", "C3 CCA density traces");
  add_common(c3_trace, common);
  c3_trace->add_option("--eta", tr.eta)->capture_default_str();
  c3_trace->add_option("-M,--cells", tr.cells)->capture_default_str();
  c3_trace->add_option("--per-side", tr.per_side, "ICs above and below one half")
      ->capture_default_str();
  c3_trace->add_option("-T,--steps", tr.steps)->capture_default_str();

  GridArgs gr;
  auto* grid = app.add_subcommand("totalistic-grid", "Hamming distances over (p1, p2)");
  add_common(grid, common);
  grid->add_option("--resolution", gr.options.resolution)->capture_default_str();
  grid->add_option("-M,--cells", gr.options.cells)->capture_default_str();
  grid->add_option("-T,--steps", gr.options.steps)->capture_default_str();
  grid->add_option("--runs", gr.options.runs)->capture_default_str();
  grid->add_flag("--paper-scale", gr.paper_scale, "101 x 101 grid, 100 runs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    apply_isa(common);
    if (*simulate) run_simulate(common, sim);
    if (*cca_run) run_cca(common, cca);
    if (*decompose) run_decompose(common, dec);
    if (*dalpha) run_dalpha_cmd(common, da);
    if (*classify) run_classify(common, cl);
    if (*c3_conv) run_c3(common, c3);
    if (*c3_trace) run_trace(common, tr);
    if (*grid) run_grid(common, gr);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const UnsupportedError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << '\n';
    return kExitRuntime;
  }
  return EXIT_SUCCESS;
}
