#include "binaryne/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace binaryne {

void EvalConfig::validate(std::uint32_t labeled_count) const {
  if (ks.empty()) throw std::invalid_argument("need at least one K cutoff");
  for (std::uint32_t k : ks) {
    if (k < 1) throw std::invalid_argument("K cutoffs must be >= 1");
    if (labeled_count == 0 || k > labeled_count - 1) {
      throw std::invalid_argument("K=" + std::to_string(k) +
                                  " exceeds labeled node count minus one (" +
                                  std::to_string(labeled_count) + " labeled)");
    }
  }
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
}

double precision_at_k(const RankedResult& ranked, NodeId query, const LabelMap& labels,
                      std::uint32_t k) {
  auto query_class = labels.label(query);
  if (!query_class) throw std::invalid_argument("query node is unlabeled");
  if (ranked.entries.size() < k) throw std::invalid_argument("ranked list shorter than K");
  std::uint32_t hits = 0;
  for (std::uint32_t i = 0; i < k; ++i) {
    auto c = labels.label(ranked.entries[i].node);
    if (c && *c == *query_class) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(k);
}

namespace {

double ap_at_k_with_denominator(const RankedResult& ranked, std::uint32_t query_class,
                                const LabelMap& labels, std::uint32_t k,
                                std::uint64_t denominator) {
  if (denominator == 0) return 0.0;
  double sum = 0.0;
  std::uint32_t hits = 0;
  for (std::uint32_t i = 0; i < k; ++i) {
    auto c = labels.label(ranked.entries[i].node);
    if (c && *c == query_class) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(denominator);
}

}  // namespace

double average_precision_at_k(const RankedResult& ranked, NodeId query, const LabelMap& labels,
                              std::uint32_t k, bool exclude_query) {
  auto query_class = labels.label(query);
  if (!query_class) throw std::invalid_argument("query node is unlabeled");
  if (ranked.entries.size() < k) throw std::invalid_argument("ranked list shorter than K");
  std::uint64_t denom = labels.class_size(*query_class);
  if (exclude_query && denom > 0) --denom;
  return ap_at_k_with_denominator(ranked, *query_class, labels, k, denom);
}

double map_at_k(std::span<const double> per_query_ap) {
  if (per_query_ap.empty()) throw std::invalid_argument("no AP values to average");
  double sum = 0.0;
  for (double ap : per_query_ap) sum += ap;
  return sum / static_cast<double>(per_query_ap.size());
}

namespace {

template <typename QueryFn>
EvalReport benchmark_impl(std::uint32_t node_count, const LabelMap& labels,
                          const EvalConfig& cfg, std::uint64_t memory_bytes, QueryFn&& run_query) {
  cfg.validate(labels.labeled_count());
  const std::uint32_t max_k = *std::max_element(cfg.ks.begin(), cfg.ks.end());

  std::vector<NodeId> queries;
  queries.reserve(labels.labeled_count());
  for (NodeId v = 0; v < node_count; ++v) {
    if (labels.label(v)) queries.push_back(v);
  }

  struct PerQuery {
    std::vector<double> precision;
    std::vector<double> ap;
    double seconds = 0.0;
    bool degenerate = false;
  };
  std::vector<PerQuery> rows(queries.size());

  auto evaluate_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t qi = begin; qi < end; ++qi) {
      const NodeId q = queries[qi];
      const std::uint32_t q_class = *labels.label(q);
      const RankedResult ranked = run_query(q, max_k);
      PerQuery& row = rows[qi];
      row.seconds = std::chrono::duration<double>(ranked.elapsed).count();
      std::uint64_t denom = labels.class_size(q_class);
      if (cfg.exclude_query && denom > 0) --denom;
      row.degenerate = denom == 0;
      row.precision.reserve(cfg.ks.size());
      row.ap.reserve(cfg.ks.size());
      for (std::uint32_t k : cfg.ks) {
        row.precision.push_back(precision_at_k(ranked, q, labels, k));
        row.ap.push_back(ap_at_k_with_denominator(ranked, q_class, labels, k, denom));
      }
    }
  };

  const std::uint32_t workers = std::max(1u, std::min<std::uint32_t>(
                                                  cfg.threads,
                                                  static_cast<std::uint32_t>(queries.size())));
  if (workers <= 1) {
    evaluate_range(0, queries.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t per = (queries.size() + workers - 1) / workers;
    for (std::uint32_t t = 0; t < workers; ++t) {
      const std::size_t begin = std::min(static_cast<std::size_t>(t) * per, queries.size());
      const std::size_t end = std::min(begin + per, queries.size());
      pool.emplace_back([&, begin, end] { evaluate_range(begin, end); });
    }
    for (auto& th : pool) th.join();
  }

  // Deterministic ordered reduction over query index.
  EvalReport report;
  report.memory_bytes = memory_bytes;
  report.queries = queries.size();
  report.per_k.resize(cfg.ks.size());
  double seconds = 0.0;
  for (std::size_t i = 0; i < cfg.ks.size(); ++i) {
    report.per_k[i].k = cfg.ks[i];
  }
  for (const PerQuery& row : rows) {
    seconds += row.seconds;
    if (row.degenerate) ++report.degenerate_queries;
    for (std::size_t i = 0; i < cfg.ks.size(); ++i) {
      report.per_k[i].precision += row.precision[i];
      report.per_k[i].map += row.ap[i];
    }
  }
  if (!rows.empty()) {
    for (auto& pk : report.per_k) {
      pk.precision /= static_cast<double>(rows.size());
      pk.map /= static_cast<double>(rows.size());
    }
    report.mean_query_seconds = seconds / static_cast<double>(rows.size());
  }
  return report;
}

}  // namespace

EvalReport run_benchmark(const CodeMatrix& codes, const LabelMap& labels,
                         const EvalConfig& cfg) {
  return benchmark_impl(codes.node_count(), labels, cfg, codes.payload_bytes(),
                        [&](NodeId q, std::uint32_t k) {
                          return top_k(codes, q, k, cfg.exclude_query);
                        });
}

EvalReport run_benchmark_euclidean(const EmbeddingMatrix& embeddings, const LabelMap& labels,
                                   const EvalConfig& cfg) {
  const std::uint64_t bytes =
      std::uint64_t(embeddings.node_count()) * embeddings.dim() * sizeof(double);
  return benchmark_impl(embeddings.node_count(), labels, cfg, bytes,
                        [&](NodeId q, std::uint32_t k) {
                          return top_k_euclidean(embeddings, q, k, cfg.exclude_query);
                        });
}

CodeMatrix feature_codes(const AttributeMatrix& attrs, std::uint32_t node_count) {
  if (attrs.attr_count() == 0) throw std::invalid_argument("no attributes to binarize");
  CodeMatrix codes(node_count, attrs.attr_count());
  for (const auto& e : attrs.entries()) {
    if (e.weight > 0.0) codes.set_bit(e.node, e.attr, true);
  }
  return codes;
}

std::string format_report_tsv(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  out << "method";
  if (!rows.empty()) {
    for (const auto& pk : rows.front().report.per_k) {
      out << "\tprecision@" << pk.k << "\tMAP@" << pk.k;
    }
  }
  out << "\tquery_ms\tmemory_bytes\tqueries\n";
  for (const ReportRow& row : rows) {
    out << row.method;
    char buf[32];
    for (const auto& pk : row.report.per_k) {
      std::snprintf(buf, sizeof(buf), "%.4f", pk.precision);
      out << '\t' << buf;
      std::snprintf(buf, sizeof(buf), "%.4f", pk.map);
      out << '\t' << buf;
    }
    std::snprintf(buf, sizeof(buf), "%.4f", row.report.mean_query_seconds * 1e3);
    out << '\t' << buf << '\t' << row.report.memory_bytes << '\t' << row.report.queries << '\n';
  }
  return out.str();
}

std::string format_report_table(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  char buf[64];
  out << "method          ";
  if (!rows.empty()) {
    for (const auto& pk : rows.front().report.per_k) {
      std::snprintf(buf, sizeof(buf), " prec@%-5u MAP@%-6u", pk.k, pk.k);
      out << buf;
    }
  }
  out << "  query(ms)     memory\n";
  for (const ReportRow& row : rows) {
    std::snprintf(buf, sizeof(buf), "%-16s", row.method.c_str());
    out << buf;
    for (const auto& pk : row.report.per_k) {
      std::snprintf(buf, sizeof(buf), " %9.4f %10.4f", pk.precision, pk.map);
      out << buf;
    }
    std::snprintf(buf, sizeof(buf), " %10.4f %10llu\n", row.report.mean_query_seconds * 1e3,
                  static_cast<unsigned long long>(row.report.memory_bytes));
    out << buf;
  }
  return out.str();
}

}  // namespace binaryne
