#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>
#include <dynleiden/dynleiden.hpp>

using namespace dynleiden;

namespace {

struct UpdateOptions {
  std::string batch_path;
  std::string state_path;
  std::string algorithm = "df";
  std::string write_graph;
  std::string membership_out;
};


void write_membership(const std::string& path, const Membership& m) {
  std::ofstream f(path);
  if (!f) throw input_error("cannot write " + path);
  for (std::size_t i = 0; i < m.size(); ++i) f << i << ' ' << m[i] << '\n';
  if (!f) throw input_error("cannot write " + path);
}


// One step of a multi-invocation run: the state file holds the communities
// of the graph given with --graph; the batch is applied and the state advanced.
std::vector<ResultRow> run_update(const ExperimentSpec& s, const UpdateOptions& u) {
  if (u.state_path.empty()) throw input_error("--state is required for the update experiment");
  s.config.validate();
  Graph g = load_graph(s.graph_path, s.format);
  const int T = s.thread_counts().front();
  LeidenConfig cfg = s.config;
  cfg.thread_count = T;
  DynamicContext ctx = std::filesystem::exists(u.state_path)
                           ? load_context(u.state_path)
                           : DynamicContext::from_membership(g, static_leiden(g, cfg).membership);
  if (ctx.order() != g.order()) throw input_error(u.state_path + ": state does not match the graph");
  std::vector<ResultRow> rows;
  if (!u.batch_path.empty()) {
    auto b = load_batch(u.batch_path, g);
    Graph g1 = apply_batch(g, b);
    StepResult r;
    double ms = 0;
    for (const auto& a : detail::kDynamicAlgorithms)
      if (u.algorithm == a.name) r = detail::timed([&] { return a.run(g1, b, ctx, cfg); }, ms);
    if (r.run.membership.empty() && g1.order() > 0) throw input_error("unknown algorithm: " + u.algorithm);
    auto row = detail::RowBuilder(s, g1).row(u.algorithm.c_str(), 0, 0, T, ms, r.run);
    row.batch_fraction = g.size() ? double(b.deletions.size() + b.insertions.size()) / double(g.size()) : 0;
    rows.push_back(row);
    ctx = std::move(r.ctx);
    g = std::move(g1);
  }
  save_context(u.state_path, ctx);
  if (!u.write_graph.empty()) write_edge_list(u.write_graph, g);
  if (!u.membership_out.empty()) write_membership(u.membership_out, ctx.membership);
  return rows;
}

}  // namespace


int main(int argc, char** argv) {
  CLI::App app{"Static and dynamic Leiden community detection benchmarks"};
  ExperimentSpec opts;
  std::string experiment = "random-batch", format = "auto", out = "-";
  bool no_tracking = false;
  UpdateOptions upd;

  app.add_option("--experiment", experiment, "static | random-batch | stability | affected-stats | temporal | scaling | update")
      ->capture_default_str();
  app.add_option("--graph", opts.graph_path, "Input graph (.mtx or edge list; temporal: 'u v t' lines)")->required();
  app.add_option("--format", format, "auto | mtx | edges")->capture_default_str();
  app.add_option("--fractions", opts.fractions, "Batch sizes as fractions of |E|")->delimiter(',')->capture_default_str();
  app.add_option("--trials", opts.trials, "Random batches per fraction")->capture_default_str();
  app.add_option("--insert-frac", opts.insert_fraction, "Fraction of insertions in random batches")->capture_default_str();
  app.add_option("--seed", opts.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", opts.threads, "Thread counts (default: all)")->delimiter(',');
  app.add_option("--tau", opts.config.tolerance, "Local-moving tolerance")->capture_default_str();
  app.add_option("--tau-drop", opts.config.tolerance_drop, "Tolerance drop per pass")->capture_default_str();
  app.add_option("--tau-re", opts.config.refine_tolerance, "Refinement tolerance")->capture_default_str();
  app.add_option("--max-iters", opts.config.max_iterations, "Local-moving iterations per pass")->capture_default_str();
  app.add_option("--max-passes", opts.config.max_passes, "Passes per run")->capture_default_str();
  app.add_flag("--deterministic", opts.deterministic, "Single thread, runtime column left empty");
  app.add_flag("--no-tracking", no_tracking, "Disable community-id tracking");
  app.add_option("--out", out, "Output CSV ('-' for stdout)")->capture_default_str();
  app.add_option("--base-frac", opts.base_fraction, "Temporal: fraction of the stream loaded up front")->capture_default_str();
  app.add_option("--batches", opts.batch_count, "Temporal: number of batches")->capture_default_str();
  app.add_option("--batch", upd.batch_path, "Update: batch file ('+ u v [w]' / '- u v [w]' lines)");
  app.add_option("--state", upd.state_path, "Update: state file, created if missing");
  app.add_option("--algorithm", upd.algorithm, "Update: nd | ds | df")->capture_default_str();
  app.add_option("--write-graph", upd.write_graph, "Update: write the updated graph as an edge list");
  app.add_option("--membership-out", upd.membership_out, "Update: write 'vertex community' lines");
  CLI11_PARSE(app, argc, argv);

  try {
    opts.format = parse_format(format);
    opts.config.track = !no_tracking;
    opts.config.seed = opts.seed;
    std::vector<ResultRow> rows;
    if (experiment == "update") rows = run_update(opts, upd);
    else {
      opts.experiment = parse_experiment(experiment);
      rows = run_experiment(opts);
    }
    if (out == "-") write_results(std::cout, rows);
    else write_results(out, rows);
  } catch (const std::exception& e) {
    std::cerr << "dynleiden-bench: " << e.what() << '\n';
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}
