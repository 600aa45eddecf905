#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "binaryne/graph.hpp"
#include "binaryne/search.hpp"

namespace binaryne {

struct EvalConfig {
  std::vector<std::uint32_t> ks = {100, 200, 500};
  bool exclude_query = true;
  std::uint32_t threads = 1;

  void validate(std::uint32_t labeled_count) const;
};

struct EvalReport {
  struct PerK {
    std::uint32_t k = 0;
    double precision = 0.0;  // mean precision@K over labeled queries
    double map = 0.0;        // mean AP@K over labeled queries
  };
  std::vector<PerK> per_k;
  double mean_query_seconds = 0.0;  // distance-pass time averaged over queries
  std::uint64_t memory_bytes = 0;   // representation payload
  std::uint64_t queries = 0;
  // Queries whose class has no other member when the query itself is
  // excluded; they contribute AP 0 and are counted here.
  std::uint64_t degenerate_queries = 0;
};

// Fraction of the top K results sharing the query's class.
double precision_at_k(const RankedResult& ranked, NodeId query, const LabelMap& labels,
                      std::uint32_t k);

// AP@K with the full same-class count in the denominator (optionally minus
// the query itself); a zero denominator yields 0.
double average_precision_at_k(const RankedResult& ranked, NodeId query, const LabelMap& labels,
                              std::uint32_t k, bool exclude_query = true);

// MAP@K: the mean of per-query AP@K values.
double map_at_k(std::span<const double> per_query_ap);

// Queries every labeled node in turn and aggregates precision@K, MAP@K and
// mean distance-pass time.
EvalReport run_benchmark(const CodeMatrix& codes, const LabelMap& labels,
                         const EvalConfig& cfg = {});
EvalReport run_benchmark_euclidean(const EmbeddingMatrix& embeddings, const LabelMap& labels,
                                   const EvalConfig& cfg = {});

// Raw-feature Hamming baseline: one bit per attribute, set iff X_ij > 0.
CodeMatrix feature_codes(const AttributeMatrix& attrs, std::uint32_t node_count);

struct ReportRow {
  std::string method;
  EvalReport report;
};

std::string format_report_tsv(const std::vector<ReportRow>& rows);
std::string format_report_table(const std::vector<ReportRow>& rows);

}  // namespace binaryne
