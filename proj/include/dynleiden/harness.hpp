#pragma once
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>
#include "dynamic.hpp"
#include "graph.hpp"
#include "io.hpp"
#include "leiden/leiden.hpp"
#include "metrics.hpp"

namespace dynleiden {

#pragma region EXPERIMENT
enum class Experiment { static_run, random_batch, stability, affected_stats, temporal, scaling };


inline Experiment parse_experiment(const std::string& s) {
  if (s == "static") return Experiment::static_run;
  if (s == "random-batch") return Experiment::random_batch;
  if (s == "stability") return Experiment::stability;
  if (s == "affected-stats") return Experiment::affected_stats;
  if (s == "temporal") return Experiment::temporal;
  if (s == "scaling") return Experiment::scaling;
  throw input_error("unknown experiment: " + s);
}


struct ExperimentSpec {
  Experiment experiment = Experiment::random_batch;
  std::string graph_path;
  GraphFormat format = GraphFormat::automatic;
  std::vector<double> fractions = {1e-3};
  std::size_t trials = 5;
  double insert_fraction = 0.8;
  std::uint64_t seed = 42;
  std::vector<int> threads;    // empty: OpenMP default
  LeidenConfig config;
  bool deterministic = false;  // one thread, no runtime column
  double base_fraction = 0.9;  // temporal
  std::size_t batch_count = 100;

  void validate() const {
    if (trials == 0) throw input_error("trials must be at least 1");
    if (fractions.empty()) throw input_error("at least one batch fraction is needed");
    for (double f : fractions)
      if (!(f > 0 && f <= 0.5)) throw input_error("batch fractions must be in (0, 0.5]");
    if (!(insert_fraction >= 0 && insert_fraction <= 1)) throw input_error("insert fraction must be in [0, 1]");
    for (int t : threads)
      if (t < 1) throw input_error("thread counts must be positive");
    config.validate();
  }

  std::vector<int> thread_counts() const {
    if (deterministic) return {1};
    if (threads.empty()) return {detail::default_thread_count()};
    return threads;
  }

  std::string graph_name() const { return std::filesystem::path(graph_path).stem().string(); }
};
#pragma endregion




#pragma region RUNNERS
namespace detail {
/** Distinct reproducible seed per (fraction index, trial). */
inline std::uint64_t trial_seed(std::uint64_t seed, std::size_t fi, std::size_t trial) {
  std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ull * (fi + 1)) ^ (0xbf58476d1ce4e5b9ull * (trial + 1));
  x ^= x >> 31;
  return x;
}

inline std::size_t batch_size_for(const Graph& g, double fraction, bool at_least_one) {
  auto s = std::size_t(std::llround(fraction * double(g.size())));
  s = std::min(s, g.size() / 2);
  return at_least_one ? std::max<std::size_t>(s, 1) : s;
}

template <class F>
inline auto timed(F&& fn, double& ms) {
  auto t0 = std::chrono::steady_clock::now();
  auto r = fn();
  ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

using DynamicFn = StepResult (*)(const Graph&, const BatchUpdate&, const DynamicContext&, const LeidenConfig&);

struct Algorithm {
  const char* name;
  DynamicFn run;
};

inline constexpr Algorithm kDynamicAlgorithms[] = {{"nd", nd_leiden}, {"ds", ds_leiden}, {"df", df_leiden}};

class RowBuilder {
 public:
  RowBuilder(const ExperimentSpec& s, const Graph& g) : spec_(s), graph_(g) {}

  ResultRow row(const char* algorithm, double fraction, std::size_t trial, int threads, double ms, const LeidenResult& r) const {
    const double n = double(std::max<std::size_t>(graph_.order(), 1));
    ResultRow row;
    row.graph = spec_.graph_name();
    row.algorithm = algorithm;
    row.batch_fraction = fraction;
    row.trial = trial;
    row.threads = threads;
    if (!spec_.deterministic) row.runtime_ms = ms;
    row.modularity = modularity(graph_, r.membership);
    row.disconnected = disconnected_count(graph_, r.membership);
    row.affected_fraction = double(r.affected) / n;
    row.split_fraction = r.passes.empty() ? 0.0 : double(r.passes[0].split_marked) / n;
    row.refine_fraction = r.passes.empty() ? 0.0 : double(r.passes[0].refine.marked) / n;
    return row;
  }

 private:
  const ExperimentSpec& spec_;
  const Graph& graph_;
};

inline LeidenConfig config_for(const ExperimentSpec& s, int threads) {
  LeidenConfig c = s.config;
  c.thread_count = threads;
  return c;
}

/** Static run, then one step of every dynamic algorithm from the same prior state. */
inline void run_all(const ExperimentSpec& s, const Graph& g0, const DynamicContext& ctx0, const BatchUpdate& b, double fraction,
                    std::size_t trial, int threads, std::vector<ResultRow>& rows) {
  const LeidenConfig cfg = config_for(s, threads);
  Graph g1 = apply_batch(g0, b);
  RowBuilder rb(s, g1);
  double ms = 0;
  auto st = timed([&] { return static_leiden(g1, cfg); }, ms);
  rows.push_back(rb.row("static", fraction, trial, threads, ms, st));
  for (const auto& a : kDynamicAlgorithms) {
    auto r = timed([&] { return a.run(g1, b, ctx0, cfg); }, ms);
    rows.push_back(rb.row(a.name, fraction, trial, threads, ms, r.run));
  }
}
}  // namespace detail


/** Static Leiden on the input graph, once per trial. */
inline std::vector<ResultRow> run_static(const ExperimentSpec& s) {
  s.validate();
  Graph g = load_graph(s.graph_path, s.format);
  std::vector<ResultRow> rows;
  detail::RowBuilder rb(s, g);
  for (int T : s.thread_counts())
    for (std::size_t t = 0; t < s.trials; ++t) {
      double ms = 0;
      auto r = detail::timed([&] { return static_leiden(g, detail::config_for(s, T)); }, ms);
      rows.push_back(rb.row("static", 0, t, T, ms, r));
    }
  return rows;
}


/** Random batches applied to the input graph; static and ND/DS/DF from the same prior communities. */
inline std::vector<ResultRow> run_random_batch(const ExperimentSpec& s) {
  s.validate();
  Graph g = load_graph(s.graph_path, s.format);
  const int T = s.thread_counts().front();
  auto base = static_leiden(g, detail::config_for(s, T));
  auto ctx0 = DynamicContext::from_membership(g, base.membership);
  std::vector<ResultRow> rows;
  for (std::size_t fi = 0; fi < s.fractions.size(); ++fi)
    for (std::size_t t = 0; t < s.trials; ++t) {
      auto b = generate_batch(g, detail::batch_size_for(g, s.fractions[fi], true), s.insert_fraction, detail::trial_seed(s.seed, fi, t));
      detail::run_all(s, g, ctx0, b, s.fractions[fi], t, T, rows);
    }
  return rows;
}


/**
 * Delete a random set of edges, then reinsert them, updating communities
 * dynamically at each step; report how many vertices end up with the same
 * community id as the static result on the original graph.
 * @param size_override number of deleted edges instead of the fraction (for tests)
 */
inline std::vector<ResultRow> run_stability(const ExperimentSpec& s, std::optional<std::size_t> size_override = std::nullopt) {
  s.validate();
  Graph g0 = load_graph(s.graph_path, s.format);
  const int T = s.thread_counts().front();
  auto ref = static_leiden(g0, detail::config_for(s, T));
  auto ctx0 = DynamicContext::from_membership(g0, ref.membership);
  std::vector<ResultRow> rows;
  for (std::size_t fi = 0; fi < s.fractions.size(); ++fi)
    for (std::size_t t = 0; t < s.trials; ++t) {
      std::size_t size = size_override ? *size_override : detail::batch_size_for(g0, s.fractions[fi], false);
      auto del = generate_batch(g0, size, 0.0, detail::trial_seed(s.seed, fi, t));
      auto ins = inverse_batch(del);
      Graph g1 = apply_batch(g0, del);
      detail::RowBuilder rb(s, g0);
      for (bool track : {true, false})
        for (const auto& a : detail::kDynamicAlgorithms) {
          LeidenConfig cfg = detail::config_for(s, T);
          cfg.track = track;
          double ms1 = 0, ms2 = 0;
          auto r1 = detail::timed([&] { return a.run(g1, del, ctx0, cfg); }, ms1);
          auto r2 = detail::timed([&] { return a.run(g0, ins, r1.ctx, cfg); }, ms2);
          std::string name = std::string(a.name) + (track ? "" : "-notrack");
          auto row = rb.row(name.c_str(), s.fractions[fi], t, T, ms1 + ms2, r2.run);
          row.match_percent = match_percent(r2.run.membership, ref.membership);
          rows.push_back(row);
        }
    }
  return rows;
}


/** Initial affected fraction of DS and DF on random batches. */
inline std::vector<ResultRow> run_affected_stats(const ExperimentSpec& s) {
  s.validate();
  Graph g = load_graph(s.graph_path, s.format);
  const int T = s.thread_counts().front();
  const LeidenConfig cfg = detail::config_for(s, T);
  auto base = static_leiden(g, cfg);
  auto ctx0 = DynamicContext::from_membership(g, base.membership);
  std::vector<ResultRow> rows;
  for (std::size_t fi = 0; fi < s.fractions.size(); ++fi)
    for (std::size_t t = 0; t < s.trials; ++t) {
      auto b = generate_batch(g, detail::batch_size_for(g, s.fractions[fi], true), s.insert_fraction, detail::trial_seed(s.seed, fi, t));
      Graph g1 = apply_batch(g, b);
      detail::RowBuilder rb(s, g1);
      for (const auto& a : {detail::kDynamicAlgorithms[1], detail::kDynamicAlgorithms[2]}) {
        double ms = 0;
        auto r = detail::timed([&] { return a.run(g1, b, ctx0, cfg); }, ms);
        rows.push_back(rb.row(a.name, s.fractions[fi], t, T, ms, r.run));
      }
    }
  return rows;
}


/**
 * Replay a temporal graph: load the first part as the base graph and feed the
 * rest as consecutive insertion batches. Each dynamic algorithm carries its own
 * state across batches; static runs from scratch on every snapshot.
 * The trial column holds the batch index.
 * @param on_step optional callback after each batch, with the graph and the contexts (nd, ds, df)
 */
inline std::vector<ResultRow> run_temporal(
    const ExperimentSpec& s,
    const std::function<void(const Graph&, const std::vector<DynamicContext>&)>& on_step = {}) {
  s.validate();
  const int T = s.thread_counts().front();
  const LeidenConfig cfg = detail::config_for(s, T);
  std::vector<ResultRow> rows;
  for (double f : s.fractions) {
    // Count the stream once to size the batches.
    auto probe = load_temporal(s.graph_path, s.base_fraction, 0, 0);
    auto size = std::max<std::size_t>(1, std::size_t(std::llround(f * double(probe.stream_edges))));
    auto tg = load_temporal(s.graph_path, s.base_fraction, size, s.batch_count);
    Graph g = std::move(tg.base);
    auto base = static_leiden(g, cfg);
    std::vector<DynamicContext> ctx(3, DynamicContext::from_membership(g, base.membership));
    for (std::size_t k = 0; k < tg.batches.size(); ++k) {
      const auto& b = tg.batches[k];
      g = apply_batch(g, b);
      detail::RowBuilder rb(s, g);
      double ms = 0;
      auto st = detail::timed([&] { return static_leiden(g, cfg); }, ms);
      rows.push_back(rb.row("static", f, k, T, ms, st));
      for (std::size_t a = 0; a < 3; ++a) {
        auto r = detail::timed([&] { return detail::kDynamicAlgorithms[a].run(g, b, ctx[a], cfg); }, ms);
        rows.push_back(rb.row(detail::kDynamicAlgorithms[a].name, f, k, T, ms, r.run));
        ctx[a] = std::move(r.ctx);
      }
      if (on_step) on_step(g, ctx);
    }
  }
  return rows;
}


/** One random batch (first fraction), all four algorithms at every thread count. */
inline std::vector<ResultRow> run_scaling(const ExperimentSpec& s) {
  s.validate();
  Graph g = load_graph(s.graph_path, s.format);
  const double f = s.fractions.front();
  auto b = generate_batch(g, detail::batch_size_for(g, f, true), s.insert_fraction, detail::trial_seed(s.seed, 0, 0));
  std::vector<ResultRow> rows;
  for (int T : s.thread_counts()) {
    auto base = static_leiden(g, detail::config_for(s, T));
    auto ctx0 = DynamicContext::from_membership(g, base.membership);
    detail::run_all(s, g, ctx0, b, f, 0, T, rows);
  }
  return rows;
}


inline std::vector<ResultRow> run_experiment(const ExperimentSpec& s) {
  switch (s.experiment) {
    case Experiment::static_run: return run_static(s);
    case Experiment::random_batch: return run_random_batch(s);
    case Experiment::stability: return run_stability(s);
    case Experiment::affected_stats: return run_affected_stats(s);
    case Experiment::temporal: return run_temporal(s);
    case Experiment::scaling: return run_scaling(s);
  }
  throw input_error("unknown experiment");
}
#pragma endregion

}  // namespace dynleiden
