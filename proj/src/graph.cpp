#include "binaryne/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <utility>

namespace binaryne {

namespace {

[[noreturn]] void fail_line(const std::filesystem::path& path, std::size_t line_no,
                            const std::string& what) {
  throw ParseError(path.string() + ":" + std::to_string(line_no) + ": " + what);
}

// Splits a line into fields. delimiter '\0' treats any run of spaces/tabs as
// one separator; otherwise fields are split on every occurrence.
void split_fields(std::string_view line, char delimiter, std::vector<std::string_view>& out) {
  out.clear();
  if (delimiter == '\0') {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      std::size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
      if (i > start) out.push_back(line.substr(start, i - start));
    }
  } else {
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t end = line.find(delimiter, start);
      if (end == std::string_view::npos) end = line.size();
      out.push_back(line.substr(start, end - start));
      start = end + 1;
      if (end == line.size()) break;
    }
  }
}

// Iterates non-empty, non-comment lines; strips trailing CR.
template <typename Fn>
void for_each_data_line(const std::filesystem::path& path, const LineFormat& fmt, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::string line;
  std::vector<std::string_view> fields;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string_view view(line);
    std::size_t first = view.find_first_not_of(" \t");
    if (first == std::string_view::npos) continue;
    if (view[first] == fmt.comment) continue;
    split_fields(view, fmt.delimiter, fields);
    if (fields.empty()) continue;
    fn(line_no, fields);
  }
  if (in.bad()) throw ParseError("i/o error while reading " + path.string());
}

double parse_weight(std::string_view text, const std::filesystem::path& path,
                    std::size_t line_no) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    fail_line(path, line_no, "invalid weight '" + std::string(text) + "'");
  }
  return value;
}

// Interns external string ids in first-appearance order.
class Interner {
 public:
  NodeId intern(std::string_view id) {
    auto it = index_.find(std::string(id));
    if (it != index_.end()) return it->second;
    NodeId next = static_cast<NodeId>(ids_.size());
    ids_.emplace_back(id);
    index_.emplace(ids_.back(), next);
    return next;
  }
  std::optional<NodeId> find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::vector<std::string> take_ids() { return std::move(ids_); }
  std::size_t size() const { return ids_.size(); }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, NodeId> index_;
};

}  // namespace

std::optional<NodeId> Graph::find(std::string_view external) const {
  auto it = index_.find(std::string(external));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Graph Graph::build(std::vector<std::pair<NodeId, NodeId>> edges, std::vector<std::string> ids,
                   std::uint64_t* dropped_self_loops) {
  std::uint64_t dropped = 0;
  std::vector<std::pair<NodeId, NodeId>> canonical;
  canonical.reserve(edges.size());
  for (auto [a, b] : edges) {
    if (a == b) {
      ++dropped;
      continue;
    }
    canonical.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(canonical.begin(), canonical.end());
  canonical.erase(std::unique(canonical.begin(), canonical.end()), canonical.end());
  if (dropped_self_loops) *dropped_self_loops = dropped;

  Graph g;
  g.ids_ = std::move(ids);
  g.edge_count_ = canonical.size();
  const std::uint32_t n = g.node_count();
  std::vector<std::uint32_t> degree(n, 0);
  for (auto [a, b] : canonical) {
    ++degree[a];
    ++degree[b];
  }
  g.offsets_.assign(n + 1, 0);
  for (std::uint32_t v = 0; v < n; ++v) g.offsets_[v + 1] = g.offsets_[v] + degree[v];
  g.adj_.resize(g.offsets_[n]);
  std::vector<std::uint64_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (auto [a, b] : canonical) {
    g.adj_[cursor[a]++] = b;
    g.adj_[cursor[b]++] = a;
  }
  // Canonical pairs were sorted, so per-node lists come out sorted for the
  // low endpoint; the high endpoint needs a pass.
  for (std::uint32_t v = 0; v < n; ++v) {
    std::sort(g.adj_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]),
              g.adj_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]));
  }
  g.index_.reserve(g.ids_.size());
  for (NodeId v = 0; v < n; ++v) g.index_.emplace(g.ids_[v], v);
  return g;
}

Graph load_edge_list(const std::filesystem::path& path, const LineFormat& fmt) {
  Interner interner;
  std::vector<std::pair<NodeId, NodeId>> edges;
  for_each_data_line(path, fmt, [&](std::size_t line_no, const std::vector<std::string_view>& f) {
    if (f.size() != 2) fail_line(path, line_no, "expected 'src dst'");
    NodeId a = interner.intern(f[0]);
    NodeId b = interner.intern(f[1]);
    edges.emplace_back(a, b);
  });
  if (interner.size() == 0) throw ParseError("empty graph: " + path.string());
  std::uint64_t dropped = 0;
  Graph g = Graph::build(std::move(edges), interner.take_ids(), &dropped);
  if (dropped > 0) {
    std::fprintf(stderr, "warning: dropped %llu self-loop(s) while loading %s\n",
                 static_cast<unsigned long long>(dropped), path.string().c_str());
  }
  return g;
}

AttributeMatrix AttributeMatrix::build(std::vector<Entry> triplets,
                                       std::vector<std::string> attr_ids,
                                       std::uint32_t node_count) {
  std::sort(triplets.begin(), triplets.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.node, a.attr) < std::tie(b.node, b.attr);
  });
  // Duplicate (node, attr) triplets sum their weights.
  std::vector<Entry> merged;
  merged.reserve(triplets.size());
  for (const Entry& e : triplets) {
    if (e.weight == 0.0) continue;
    if (!merged.empty() && merged.back().node == e.node && merged.back().attr == e.attr) {
      merged.back().weight += e.weight;
    } else {
      merged.push_back(e);
    }
  }

  AttributeMatrix m;
  m.entries_ = std::move(merged);
  m.attr_ids_ = std::move(attr_ids);
  m.row_offsets_.assign(node_count + 1, 0);
  for (const Entry& e : m.entries_) ++m.row_offsets_[e.node + 1];
  for (std::uint32_t v = 0; v < node_count; ++v) m.row_offsets_[v + 1] += m.row_offsets_[v];

  const std::uint32_t attr_count = static_cast<std::uint32_t>(m.attr_ids_.size());
  m.col_offsets_.assign(attr_count + 1, 0);
  for (const Entry& e : m.entries_) ++m.col_offsets_[e.attr + 1];
  for (std::uint32_t a = 0; a < attr_count; ++a) m.col_offsets_[a + 1] += m.col_offsets_[a];
  m.col_index_.resize(m.entries_.size());
  std::vector<std::uint64_t> cursor(m.col_offsets_.begin(), m.col_offsets_.end() - 1);
  for (std::uint32_t i = 0; i < m.entries_.size(); ++i) {
    m.col_index_[cursor[m.entries_[i].attr]++] = i;
  }
  m.total_mass_ = 0.0;
  for (const Entry& e : m.entries_) m.total_mass_ += e.weight;
  return m;
}

std::vector<double> AttributeMatrix::column_sums() const {
  std::vector<double> sums(attr_count(), 0.0);
  for (const Entry& e : entries_) sums[e.attr] += e.weight;
  return sums;
}

AttributeMatrix load_attributes(const std::filesystem::path& path, const Graph& graph,
                                bool strict, const LineFormat& fmt) {
  Interner attrs;
  std::vector<AttributeMatrix::Entry> triplets;
  for_each_data_line(path, fmt, [&](std::size_t line_no, const std::vector<std::string_view>& f) {
    if (f.size() != 3) fail_line(path, line_no, "expected 'node attr weight'");
    auto node = graph.find(f[0]);
    if (!node) {
      if (strict) fail_line(path, line_no, "unknown node id '" + std::string(f[0]) + "'");
      return;
    }
    double w = parse_weight(f[2], path, line_no);
    if (w < 0.0) fail_line(path, line_no, "negative weight");
    if (w == 0.0) return;
    triplets.push_back({*node, attrs.intern(f[1]), w});
  });
  return AttributeMatrix::build(std::move(triplets), attrs.take_ids(), graph.node_count());
}

LabelMap LabelMap::build(std::vector<std::int32_t> labels, std::vector<std::string> class_names) {
  LabelMap m;
  m.labels_ = std::move(labels);
  m.class_names_ = std::move(class_names);
  m.class_sizes_.assign(m.class_names_.size(), 0);
  for (std::int32_t l : m.labels_) {
    if (l >= 0) {
      ++m.labeled_count_;
      ++m.class_sizes_[static_cast<std::size_t>(l)];
    }
  }
  return m;
}

namespace {

template <typename Resolve>
LabelMap load_labels_impl(const std::filesystem::path& path, std::uint32_t node_count,
                          Resolve&& resolve, const LineFormat& fmt) {
  Interner classes;
  std::vector<std::int32_t> labels(node_count, -1);
  for_each_data_line(path, fmt, [&](std::size_t line_no, const std::vector<std::string_view>& f) {
    if (f.size() != 2) fail_line(path, line_no, "expected 'node class'");
    std::optional<NodeId> node = resolve(f[0]);
    if (!node) fail_line(path, line_no, "unknown node id '" + std::string(f[0]) + "'");
    std::int32_t cls = static_cast<std::int32_t>(classes.intern(f[1]));
    if (labels[*node] >= 0 && labels[*node] != cls) {
      fail_line(path, line_no, "conflicting label for node '" + std::string(f[0]) + "'");
    }
    labels[*node] = cls;
  });
  return LabelMap::build(std::move(labels), classes.take_ids());
}

}  // namespace

LabelMap load_labels(const std::filesystem::path& path, const Graph& graph,
                     const LineFormat& fmt) {
  return load_labels_impl(
      path, graph.node_count(), [&](std::string_view id) { return graph.find(id); }, fmt);
}

LabelMap load_labels(const std::filesystem::path& path, const std::vector<std::string>& vocab,
                     const LineFormat& fmt) {
  std::unordered_map<std::string_view, NodeId> index;
  index.reserve(vocab.size());
  for (NodeId v = 0; v < vocab.size(); ++v) index.emplace(vocab[v], v);
  return load_labels_impl(
      path, static_cast<std::uint32_t>(vocab.size()),
      [&](std::string_view id) -> std::optional<NodeId> {
        auto it = index.find(id);
        if (it == index.end()) return std::nullopt;
        return it->second;
      },
      fmt);
}

void save_edge_list(const Graph& graph, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    for (NodeId u : graph.neighbors(v)) {
      if (v < u) out << graph.external_id(v) << ' ' << graph.external_id(u) << '\n';
    }
  }
  if (!out) throw ParseError("i/o error while writing " + path.string());
}

void save_vocab(const std::vector<std::string>& ids, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  for (const std::string& id : ids) out << id << '\n';
  if (!out) throw ParseError("i/o error while writing " + path.string());
}

std::vector<std::string> load_vocab(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ids.push_back(line);
  }
  while (!ids.empty() && ids.back().empty()) ids.pop_back();
  return ids;
}

}  // namespace binaryne
