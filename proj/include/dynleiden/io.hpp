#pragma once
#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_set>
#include <vector>
#include "dynamic.hpp"
#include "graph.hpp"
#include "types.hpp"

namespace dynleiden {

#pragma region PARSING
enum class GraphFormat { automatic, matrix_market, edge_list };


inline GraphFormat parse_format(std::string_view s) {
  if (s == "auto") return GraphFormat::automatic;
  if (s == "mtx" || s == "matrix-market") return GraphFormat::matrix_market;
  if (s == "edges" || s == "edge-list") return GraphFormat::edge_list;
  throw input_error("unknown graph format: " + std::string(s));
}


namespace detail {
inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t k = 0;
  while (k < line.size()) {
    while (k < line.size() && std::isspace(static_cast<unsigned char>(line[k]))) ++k;
    std::size_t b = k;
    while (k < line.size() && !std::isspace(static_cast<unsigned char>(line[k]))) ++k;
    if (k > b) out.push_back(line.substr(b, k - b));
  }
  return out;
}

template <class T>
inline T parse_number(std::string_view s, const std::string& path, std::size_t line, const char* what) {
  T x{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || p != s.data() + s.size())
    throw parse_error(path, line, std::string("invalid ") + what + " '" + std::string(s) + "'");
  return x;
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw input_error("cannot open " + path);
  return f;
}

inline bool is_comment(std::string_view line) {
  auto fs = line.find_first_not_of(" \t\r");
  return fs == std::string_view::npos || line[fs] == '#' || line[fs] == '%';
}

inline Graph load_edge_list(const std::string& path) {
  auto f = open_input(path);
  std::vector<Edge> edges;
  std::uint64_t n = 0;
  std::string line;
  for (std::size_t ln = 1; std::getline(f, line); ++ln) {
    if (is_comment(line)) continue;
    auto fs = split_fields(line);
    if (fs.size() < 2 || fs.size() > 3) throw parse_error(path, ln, "expected 'u v [w]'");
    auto u = parse_number<std::uint32_t>(fs[0], path, ln, "vertex id");
    auto v = parse_number<std::uint32_t>(fs[1], path, ln, "vertex id");
    float w = fs.size() == 3 ? parse_number<float>(fs[2], path, ln, "weight") : 1.0f;
    if (u == kNoVertex || v == kNoVertex) throw parse_error(path, ln, "vertex id too large");
    if (!(w > 0) || !std::isfinite(w)) throw parse_error(path, ln, "weight must be positive");
    n = std::max<std::uint64_t>(n, std::max(u, v) + std::uint64_t(1));
    if (u != v) edges.push_back({u, v, w});
  }
  return build_graph(edges, n);
}

inline Graph load_matrix_market(const std::string& path) {
  auto f = open_input(path);
  std::string line;
  std::size_t ln = 1;
  if (!std::getline(f, line)) throw parse_error(path, ln, "missing header");
  auto hs = split_fields(line);
  if (hs.size() < 5 || hs[0] != "%%MatrixMarket" || hs[1] != "matrix" || hs[2] != "coordinate")
    throw parse_error(path, ln, "expected '%%MatrixMarket matrix coordinate <field> <symmetry>'");
  const bool pattern = hs[3] == "pattern";
  if (!pattern && hs[3] != "real" && hs[3] != "integer") throw parse_error(path, ln, "unsupported field '" + std::string(hs[3]) + "'");
  std::size_t rows = 0, cols = 0, nnz = 0;
  bool sized = false;
  std::vector<Edge> edges;
  std::size_t seen = 0;
  while (std::getline(f, line)) {
    ++ln;
    if (is_comment(line)) continue;
    auto fs = split_fields(line);
    if (!sized) {
      if (fs.size() != 3) throw parse_error(path, ln, "expected 'rows cols entries'");
      rows = parse_number<std::size_t>(fs[0], path, ln, "row count");
      cols = parse_number<std::size_t>(fs[1], path, ln, "column count");
      nnz = parse_number<std::size_t>(fs[2], path, ln, "entry count");
      if (rows != cols) throw parse_error(path, ln, "matrix is not square");
      if (rows >= kNoVertex) throw parse_error(path, ln, "too many vertices");
      sized = true;
      edges.reserve(nnz);
      continue;
    }
    if (seen == nnz) throw parse_error(path, ln, "more entries than declared (" + std::to_string(nnz) + ")");
    if (fs.size() != (pattern ? 2u : 3u)) throw parse_error(path, ln, pattern ? "expected 'row col'" : "expected 'row col value'");
    auto u = parse_number<std::uint64_t>(fs[0], path, ln, "row index");
    auto v = parse_number<std::uint64_t>(fs[1], path, ln, "column index");
    if (u < 1 || u > rows || v < 1 || v > cols) throw parse_error(path, ln, "index out of range");
    float w = pattern ? 1.0f : parse_number<float>(fs[2], path, ln, "value");
    if (!(w > 0) || !std::isfinite(w)) throw parse_error(path, ln, "weight must be positive");
    ++seen;
    if (u != v) edges.push_back({vertex_id(u - 1), vertex_id(v - 1), w});
  }
  if (!sized) throw parse_error(path, ln + 1, "missing size line");
  if (seen < nnz)
    throw parse_error(path, ln + 1, "file ends after " + std::to_string(seen) + " of " + std::to_string(nnz) + " entries");
  return build_graph(edges, rows);
}
}  // namespace detail


/**
 * Load an undirected graph. Directed entries are mirrored; self-loops are dropped.
 * Edge lists are 0-based "u v [w]" lines; matrix-market files are 1-based.
 */
inline Graph load_graph(const std::string& path, GraphFormat format = GraphFormat::automatic) {
  if (format == GraphFormat::automatic)
    format = std::filesystem::path(path).extension() == ".mtx" ? GraphFormat::matrix_market : GraphFormat::edge_list;
  return format == GraphFormat::matrix_market ? detail::load_matrix_market(path) : detail::load_edge_list(path);
}
#pragma endregion




#pragma region WRITING
namespace detail {
inline std::string format_number(double x) {
  std::array<char, 64> buf;
  auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), p);
}

inline std::ofstream open_output(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream f(path, mode);
  if (!f) throw input_error("cannot write " + path);
  return f;
}
}  // namespace detail


/** Write each undirected edge once as "u v w" (0-based). */
inline void write_edge_list(const std::string& path, const Graph& g) {
  auto f = detail::open_output(path);
  f << "# " << g.order() << " vertices\n";
  for (const auto& e : undirected_edges(g))
    f << e.source << ' ' << e.target << ' ' << detail::format_number(e.weight) << '\n';
  if (!f) throw input_error("cannot write " + path);
}
#pragma endregion




#pragma region TEMPORAL
struct TemporalGraph {
  Graph base;
  std::vector<BatchUpdate> batches;
  std::size_t stream_edges = 0;  // "u v t" lines read, self-loops excluded
};


/**
 * Replay a temporal edge stream ("u v t" lines, extra columns ignored).
 * Edges are ordered by timestamp; the first base_fraction form the base graph
 * and the rest are cut into insertion-only batches of batch_size undirected
 * edges. Edges already in the graph are skipped.
 */
inline TemporalGraph load_temporal(const std::string& path, double base_fraction, std::size_t batch_size, std::size_t batch_count) {
  if (!(base_fraction > 0 && base_fraction <= 1)) throw input_error("base fraction must be in (0, 1]");
  auto f = detail::open_input(path);
  struct Stamped {
    vertex_id u, v;
    double t;
  };
  std::vector<Stamped> stream;
  std::uint64_t n = 0;
  std::string line;
  for (std::size_t ln = 1; std::getline(f, line); ++ln) {
    if (detail::is_comment(line)) continue;
    auto fs = detail::split_fields(line);
    if (fs.size() < 3) throw parse_error(path, ln, "expected 'u v t'");
    auto u = detail::parse_number<std::uint32_t>(fs[0], path, ln, "vertex id");
    auto v = detail::parse_number<std::uint32_t>(fs[1], path, ln, "vertex id");
    auto t = detail::parse_number<double>(fs[2], path, ln, "timestamp");
    if (u == kNoVertex || v == kNoVertex) throw parse_error(path, ln, "vertex id too large");
    n = std::max<std::uint64_t>(n, std::max(u, v) + std::uint64_t(1));
    if (u != v) stream.push_back({u, v, t});
  }
  std::stable_sort(stream.begin(), stream.end(), [](const Stamped& a, const Stamped& b) { return a.t < b.t; });
  TemporalGraph out;
  out.stream_edges = stream.size();
  const std::size_t nbase = std::size_t(std::llround(base_fraction * double(stream.size())));
  std::vector<Edge> base;
  std::unordered_set<std::uint64_t> present;
  for (std::size_t k = 0; k < nbase; ++k) {
    base.push_back({stream[k].u, stream[k].v, 1});
    present.insert(detail::pair_key(stream[k].u, stream[k].v));
  }
  out.base = build_graph(base, n);
  std::size_t k = nbase;
  for (std::size_t b = 0; b < batch_count; ++b) {
    BatchUpdate batch;
    std::size_t got = 0;
    for (; k < stream.size() && got < batch_size; ++k) {
      if (!present.insert(detail::pair_key(stream[k].u, stream[k].v)).second) continue;
      batch.insertions.push_back({stream[k].u, stream[k].v, 1});
      batch.insertions.push_back({stream[k].v, stream[k].u, 1});
      ++got;
    }
    if (got < batch_size) {
      std::size_t shortfall = (batch_count - b) * batch_size - got;
      throw input_error("temporal stream too short: " + std::to_string(shortfall) + " more new edges needed for " +
                        std::to_string(batch_count) + " batches of " + std::to_string(batch_size));
    }
    detail::sort_edges(batch.insertions);
    out.batches.push_back(std::move(batch));
  }
  return out;
}


/**
 * Read an update file for `g`: "+ u v [w]" inserts, "- u v [w]" deletes
 * (weight defaults to 1 for insertions and to the stored weight for deletions).
 * Reverse edges are added.
 */
inline BatchUpdate load_batch(const std::string& path, const Graph& g) {
  auto f = detail::open_input(path);
  BatchUpdate b;
  std::string line;
  for (std::size_t ln = 1; std::getline(f, line); ++ln) {
    if (detail::is_comment(line)) continue;
    auto fs = detail::split_fields(line);
    if (fs.size() < 3 || fs.size() > 4 || (fs[0] != "+" && fs[0] != "-")) throw parse_error(path, ln, "expected '+|- u v [w]'");
    auto u = detail::parse_number<std::uint32_t>(fs[1], path, ln, "vertex id");
    auto v = detail::parse_number<std::uint32_t>(fs[2], path, ln, "vertex id");
    if (u >= g.order() || v >= g.order()) throw parse_error(path, ln, "vertex id outside the graph");
    if (fs[0] == "-") {
      auto w = g.edge_weight(u, v);
      if (!w) throw parse_error(path, ln, "deleting an edge that does not exist");
      if (fs.size() == 4 && detail::parse_number<float>(fs[3], path, ln, "weight") != *w)
        throw parse_error(path, ln, "deletion weight differs from the stored weight");
      b.deletions.push_back({u, v, *w});
      b.deletions.push_back({v, u, *w});
    } else {
      float w = fs.size() == 4 ? detail::parse_number<float>(fs[3], path, ln, "weight") : 1.0f;
      if (!(w > 0) || !std::isfinite(w)) throw parse_error(path, ln, "weight must be positive");
      b.insertions.push_back({u, v, w});
      b.insertions.push_back({v, u, w});
    }
  }
  detail::sort_edges(b.deletions);
  detail::sort_edges(b.insertions);
  return b;
}
#pragma endregion




#pragma region RESULTS
/** One CSV row. Absent optional values are written as empty fields. */
struct ResultRow {
  std::string graph;
  std::string algorithm;
  double batch_fraction = 0;
  std::size_t trial = 0;
  int threads = 1;
  std::optional<double> runtime_ms;
  double modularity = 0;
  std::size_t disconnected = 0;
  std::optional<double> affected_fraction;
  std::optional<double> split_fraction;
  std::optional<double> refine_fraction;
  std::optional<double> match_percent;
};


inline constexpr const char* kResultHeader =
    "graph,algorithm,batch_fraction,trial,threads,runtime_ms,modularity,disconnected,"
    "affected_fraction,split_fraction,refine_fraction,match_percent";


namespace detail {
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

inline std::string csv_field(const std::optional<double>& x) { return x ? format_number(*x) : std::string(); }
}  // namespace detail


inline void write_results(std::ostream& out, const std::vector<ResultRow>& rows) {
  using detail::csv_field;
  using detail::format_number;
  out << kResultHeader << '\n';
  for (const auto& r : rows)
    out << csv_field(r.graph) << ',' << csv_field(r.algorithm) << ',' << format_number(r.batch_fraction) << ',' << r.trial << ','
        << r.threads << ',' << csv_field(r.runtime_ms) << ',' << format_number(r.modularity) << ',' << r.disconnected << ','
        << csv_field(r.affected_fraction) << ',' << csv_field(r.split_fraction) << ',' << csv_field(r.refine_fraction) << ','
        << csv_field(r.match_percent) << '\n';
}


inline void write_results(const std::string& path, const std::vector<ResultRow>& rows) {
  auto f = detail::open_output(path);
  write_results(f, rows);
  f.flush();
  if (!f) throw input_error("cannot write " + path);
}
#pragma endregion




#pragma region SNAPSHOT
// Layout (native byte order): 8-byte magic, u32 version, then the four
// context arrays, each as a u64 length followed by its elements.
inline constexpr char kContextMagic[8] = {'D', 'L', 'E', 'I', 'D', 'C', 'T', 'X'};
inline constexpr std::uint32_t kContextVersion = 1;


namespace detail {
template <class T>
inline void write_array(std::ostream& out, const std::vector<T>& a) {
  std::uint64_t len = a.size();
  out.write(reinterpret_cast<const char*>(&len), sizeof(len));
  out.write(reinterpret_cast<const char*>(a.data()), std::streamsize(a.size() * sizeof(T)));
}

template <class T>
inline std::vector<T> read_array(std::istream& in, const std::string& path) {
  std::uint64_t len = 0;
  if (!in.read(reinterpret_cast<char*>(&len), sizeof(len))) throw input_error(path + ": truncated snapshot");
  if (len > (std::uint64_t(1) << 40)) throw input_error(path + ": corrupt snapshot length");
  std::vector<T> a(len);
  if (!in.read(reinterpret_cast<char*>(a.data()), std::streamsize(len * sizeof(T)))) throw input_error(path + ": truncated snapshot");
  return a;
}
}  // namespace detail


inline void save_context(const std::string& path, const DynamicContext& x) {
  auto f = detail::open_output(path, std::ios::out | std::ios::binary);
  f.write(kContextMagic, sizeof(kContextMagic));
  f.write(reinterpret_cast<const char*>(&kContextVersion), sizeof(kContextVersion));
  detail::write_array(f, x.membership);
  detail::write_array(f, x.K);
  detail::write_array(f, x.sigma);
  detail::write_array(f, x.delta_sigma);
  f.flush();
  if (!f) throw input_error("cannot write " + path);
}


inline DynamicContext load_context(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw input_error("cannot open " + path);
  char magic[sizeof(kContextMagic)];
  std::uint32_t version = 0;
  if (!f.read(magic, sizeof(magic)) || std::memcmp(magic, kContextMagic, sizeof(magic)) != 0)
    throw input_error(path + ": not a context snapshot");
  if (!f.read(reinterpret_cast<char*>(&version), sizeof(version)) || version != kContextVersion)
    throw input_error(path + ": unsupported snapshot version");
  DynamicContext x;
  x.membership = detail::read_array<vertex_id>(f, path);
  x.K = detail::read_array<double>(f, path);
  x.sigma = detail::read_array<double>(f, path);
  x.delta_sigma = detail::read_array<double>(f, path);
  const std::size_t n = x.membership.size();
  if (x.K.size() != n || x.sigma.size() != n || x.delta_sigma.size() != n) throw input_error(path + ": inconsistent snapshot");
  for (vertex_id c : x.membership)
    if (c >= n) throw input_error(path + ": community id out of range");
  return x;
}
#pragma endregion

}  // namespace dynleiden
