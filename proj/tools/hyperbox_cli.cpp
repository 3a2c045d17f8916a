// hyperbox: compute Pareto front representations from the command line.
//
//   hyperbox run --problem sphere --m 3 --epsilon 0.1 --out points.csv --report report.json
//   hyperbox compare --problem sphere --m 3 --epsilon 0.02
//   hyperbox serve --start-box box.json --epsilon 0.1 --out points.csv   (solver on stdin/stdout)
//   hyperbox sample-front --problem comet --samples 5000 --out front.csv
//
// Exit codes: 0 success, 1 aborted run or protocol violation, 2 bad flags.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <hyperbox/hyperbox.hpp>

namespace {

using namespace hyperbox;

struct Options {
  std::string problem;
  std::size_t m = 3;
  double epsilon = 0.1;
  std::string epsilon_mode = "absolute";
  std::string strategy = "improved";
  std::size_t max_iterations = 100000;
  std::size_t grid_resolution = 0;
  std::string out;
  std::string report;
  std::uint64_t seed = 1;
  std::size_t samples = 5000;
  std::string start_box;
};

// Bad user input detected after parsing; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

RunConfig make_config(const Options& options) {
  RunConfig config;
  config.epsilon = options.epsilon;
  config.mode = parse_size_mode(options.epsilon_mode);
  config.strategy = parse_strategy(options.strategy);
  config.max_iterations = options.max_iterations;
  config.validate();
  return config;
}

GridOptions make_grid(const Options& options) {
  GridOptions grid;
  if (options.grid_resolution != 0) grid.resolution = {options.grid_resolution};
  return grid;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot open '" + path + "' for writing");
  return file;
}

void emit_points(const Options& options, const RunReport& report, std::size_t m, bool stdout_fallback) {
  const auto points = io::representation_points(report);
  if (!options.out.empty()) {
    auto file = open_output(options.out);
    io::write_points_csv(file, points, m);
  } else if (stdout_fallback) {
    io::write_points_csv(std::cout, points, m);
  }
}

void emit_report(const Options& options, const RunReport& report, const io::ReportContext& context) {
  if (!options.report.empty()) {
    auto file = open_output(options.report);
    io::write_report(file, report, context);
  }
  std::cerr << context.problem << ": " << report.cardinality() << " points, " << report.iterations
            << " iterations, " << to_string(report.termination) << '\n';
}

std::optional<QualityReport> quality_for(const Options& options, const ProblemSpec& spec, const RunReport& report) {
  if (!spec.front_sampler || options.samples == 0) return std::nullopt;
  return quality_summary(io::representation_points(report), spec, options.samples, options.seed);
}

int run_command(const Options& options) {
  const ProblemSpec spec = make_problem(options.problem, options.m);
  const RunConfig config = make_config(options);
  const RunReport report = run_representation(spec, config, BackendKind::automatic, make_grid(options));
  emit_points(options, report, spec.m, true);
  emit_report(options, report, {spec.name, spec.m, quality_for(options, spec, report)});
  if (report.termination == Termination::aborted) {
    std::cerr << "run aborted: " << report.abort_cause << '\n';
    return 1;
  }
  return 0;
}

int compare_command(const Options& options) {
  const ProblemSpec spec = make_problem(options.problem, options.m);
  RunConfig config = make_config(options);
  const Solver solver = make_solver(spec, BackendKind::automatic, make_grid(options));
  config.strategy = Strategy::naive;
  const RunReport naive = run_representation(spec.start_box(), config, solver);
  config.strategy = Strategy::improved;
  const RunReport improved = run_representation(spec.start_box(), config, solver);

  bool identical = naive.cardinality() == improved.cardinality();
  for (std::size_t i = 0; identical && i < naive.cardinality(); ++i) {
    identical = naive.representation[i].z == improved.representation[i].z;
  }

  nlohmann::ordered_json doc;
  doc["problem"] = spec.name;
  doc["m"] = spec.m;
  doc["epsilon"] = config.epsilon;
  doc["mode"] = std::string(to_string(config.mode));
  doc["cardinalityNaive"] = naive.cardinality();
  doc["cardinalityImproved"] = improved.cardinality();
  doc["identicalSequences"] = identical;
  doc["regionTimeNaiveMs"] = naive.region_time * 1e3;
  doc["regionTimeImprovedMs"] = improved.region_time * 1e3;
  doc["regionTimeRatio"] = naive.region_time > 0.0 ? improved.region_time / naive.region_time : 0.0;
  doc["wallTimeNaiveMs"] = naive.wall_time_total * 1e3;
  doc["wallTimeImprovedMs"] = improved.wall_time_total * 1e3;
  doc["wallTimeRatio"] = naive.wall_time_total > 0.0 ? improved.wall_time_total / naive.wall_time_total : 0.0;

  emit_points(options, improved, spec.m, false);
  if (!options.report.empty()) {
    auto file = open_output(options.report);
    file << doc.dump(2) << '\n';
  } else {
    std::cout << doc.dump(2) << '\n';
  }
  if (naive.termination == Termination::aborted || improved.termination == Termination::aborted) {
    std::cerr << "run aborted: " << naive.abort_cause << improved.abort_cause << '\n';
    return 1;
  }
  if (!identical) {
    std::cerr << "naive and improved strategies produced different representations\n";
    return 1;
  }
  return 0;
}

int serve_command(const Options& options) {
  BoxDims box;
  std::string name = "external";
  if (!options.start_box.empty()) {
    std::ifstream file(options.start_box);
    if (!file) throw UsageError("cannot read start box file '" + options.start_box + "'");
    box = io::read_start_box(file);
  } else if (!options.problem.empty()) {
    const ProblemSpec spec = make_problem(options.problem, options.m);
    box = spec.start_box();
    name = spec.name;
  } else {
    throw UsageError("serve needs --start-box or --problem");
  }

  const auto started = Session::Clock::now();
  Session session(box, make_config(options));
  int status = 0;
  try {
    io::serve(session, std::cin, std::cout);
  } catch (const ProtocolError& e) {
    std::cerr << "protocol error: " << e.what() << '\n';
    status = 1;
  } catch (const ContractError& e) {
    std::cerr << "contract error: " << e.what() << '\n';
    status = 1;
  }
  RunReport report = session.report();
  report.wall_time_total = std::chrono::duration<double>(Session::Clock::now() - started).count();
  emit_points(options, report, box.dimension(), false);
  emit_report(options, report, {name, box.dimension(), std::nullopt});
  return status;
}

int sample_front_command(const Options& options) {
  const ProblemSpec spec = make_problem(options.problem, options.m);
  const auto samples = sample_front(spec, options.samples, options.seed);
  if (!options.out.empty()) {
    auto file = open_output(options.out);
    io::write_points_csv(file, samples, spec.m);
  } else {
    io::write_points_csv(std::cout, samples, spec.m);
  }
  return 0;
}

void add_problem_flags(CLI::App& command, Options& options, bool required) {
  auto* problem = command.add_option("--problem", options.problem, "Built-in test problem")
                      ->check(CLI::IsMember({"sphere", "ellipsoid", "nonconvex", "comet", "patched"}));
  if (required) problem->required();
  command.add_option("--m", options.m, "Number of objectives (sphere/ellipsoid)")->check(CLI::Range(2, 64));
}

void add_run_flags(CLI::App& command, Options& options, bool with_strategy) {
  command.add_option("--epsilon", options.epsilon, "Target box size")->check(CLI::PositiveNumber);
  command.add_option("--epsilon-mode", options.epsilon_mode, "Box size units")
      ->check(CLI::IsMember({"absolute", "relative", "scaled"}));
  if (with_strategy) {
    command.add_option("--strategy", options.strategy, "Search region strategy")
        ->check(CLI::IsMember({"naive", "improved"}));
  }
  command.add_option("--max-iterations", options.max_iterations, "Iteration cap")->check(CLI::PositiveNumber);
  command.add_option("--out", options.out, "Points file (CSV)");
  command.add_option("--report", options.report, "Report file (JSON)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pareto front representations by hyperboxing"};
  app.require_subcommand(1);
  Options options;

  auto* run = app.add_subcommand("run", "Compute one representation");
  add_problem_flags(*run, options, true);
  add_run_flags(*run, options, true);
  run->add_option("--grid-resolution", options.grid_resolution, "Grid points per axis for grid problems")
      ->check(CLI::Range(2, 100000));
  run->add_option("--seed", options.seed, "Seed for front sampling");
  run->add_option("--samples", options.samples, "Front samples for the empirical alpha (0 disables)");

  auto* compare = app.add_subcommand("compare", "Run both strategies and compare region-management time");
  add_problem_flags(*compare, options, true);
  add_run_flags(*compare, options, false);
  compare->add_option("--grid-resolution", options.grid_resolution, "Grid points per axis for grid problems")
      ->check(CLI::Range(2, 100000));

  auto* serve = app.add_subcommand("serve", "Drive an external solver over stdin/stdout");
  add_problem_flags(*serve, options, false);
  add_run_flags(*serve, options, true);
  serve->add_option("--start-box", options.start_box, "JSON file with l0 and u0");

  auto* sample = app.add_subcommand("sample-front", "Write front samples of a problem");
  add_problem_flags(*sample, options, true);
  sample->add_option("--samples", options.samples, "Number of samples");
  sample->add_option("--seed", options.seed, "Random seed");
  sample->add_option("--out", options.out, "Output file (CSV)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*run) return run_command(options);
    if (*compare) return compare_command(options);
    if (*serve) return serve_command(options);
    return sample_front_command(options);
  } catch (const ConfigurationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const UnsupportedProblem& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
