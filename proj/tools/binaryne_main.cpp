// binaryne: learn bit-packed binary node embeddings for attributed networks
// and run fast Hamming-distance similarity search over them.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "binaryne/codes.hpp"
#include "binaryne/eval.hpp"
#include "binaryne/graph.hpp"
#include "binaryne/model.hpp"
#include "binaryne/search.hpp"
#include "binaryne/walks.hpp"

namespace fs = std::filesystem;
using namespace binaryne;

namespace {

struct WalkOptions {
  std::string edges;
  std::string pairs_out;
  std::string walk_dump;
  WalkConfig cfg;
};

struct TrainOptions {
  std::string edges;
  std::string attrs;
  bool structure_only = false;
  std::string out_prefix;
  WalkConfig walk;
  TrainConfig cfg;
  std::uint64_t log_every = 0;
};

struct SearchOptions {
  std::string codes;
  std::string vocab;
  std::string queries_file;
  std::vector<std::string> query_ids;
  std::string out;
  std::uint32_t k = 10;
  bool include_self = false;
  bool timing = false;
};

struct EvalOptions {
  std::string codes;
  std::string vocab;
  std::string labels;
  std::string feature_edges;
  std::string feature_attrs;
  std::vector<std::uint32_t> ks;
  bool include_query = false;
  bool tsv = false;
  std::string method = "binaryne";
  std::uint32_t threads = 1;
};

void echo_walk_config(const WalkConfig& cfg) {
  std::fprintf(stderr, "walks: L=%u gamma=%u window=%u seed=%llu threads=%u\n", cfg.walk_length,
               cfg.walks_per_node, cfg.window, static_cast<unsigned long long>(cfg.seed),
               cfg.threads);
}

void echo_train_config(const TrainConfig& cfg) {
  std::fprintf(stderr,
               "train: dim=%u iters=%llu negatives=%u eta=%g..%g beta=%g..%g switch=%g "
               "power=%g seed=%llu threads=%u\n",
               cfg.dim, static_cast<unsigned long long>(cfg.max_iters), cfg.negatives,
               cfg.eta_start, cfg.eta_end, cfg.beta_start, cfg.beta_end, cfg.switch_prob,
               cfg.noise_power, static_cast<unsigned long long>(cfg.seed), cfg.threads);
}

PairCounts harvest_pairs(const Graph& graph, const WalkConfig& cfg) {
  WalkSet walks = generate_walks(graph, cfg);
  std::fprintf(stderr, "generated %zu walks (%llu steps)\n", walks.size(),
               static_cast<unsigned long long>(walks.total_steps()));
  if (cfg.window >= cfg.walk_length) {
    std::fprintf(stderr, "warning: window %u >= walk length %u; few or no context pairs\n",
                 cfg.window, cfg.walk_length);
  }
  PairCounts counts = count_context_pairs(walks, cfg.window, cfg.threads);
  std::fprintf(stderr, "collected %zu distinct context pairs (total %llu)\n",
               counts.distinct_ordered(), static_cast<unsigned long long>(counts.total()));
  if (counts.empty()) std::fprintf(stderr, "warning: pair counts are empty\n");
  return counts;
}

int run_walks(const WalkOptions& opt) {
  Graph graph = load_edge_list(opt.edges);
  std::fprintf(stderr, "graph: %u nodes, %llu edges\n", graph.node_count(),
               static_cast<unsigned long long>(graph.edge_count()));
  echo_walk_config(opt.cfg);
  WalkSet walks = generate_walks(graph, opt.cfg);
  std::fprintf(stderr, "generated %zu walks (%llu steps)\n", walks.size(),
               static_cast<unsigned long long>(walks.total_steps()));
  if (opt.cfg.window >= opt.cfg.walk_length) {
    std::fprintf(stderr, "warning: window %u >= walk length %u; few or no context pairs\n",
                 opt.cfg.window, opt.cfg.walk_length);
  }
  if (!opt.walk_dump.empty()) save_walks(walks, graph.external_ids(), opt.walk_dump);
  PairCounts counts = count_context_pairs(walks, opt.cfg.window, opt.cfg.threads);
  std::fprintf(stderr, "collected %zu distinct context pairs (total %llu)\n",
               counts.distinct_ordered(), static_cast<unsigned long long>(counts.total()));
  if (counts.empty()) std::fprintf(stderr, "warning: pair counts are empty\n");
  save_pair_counts(counts, graph.external_ids(), opt.pairs_out);
  return 0;
}

int run_train(const TrainOptions& opt) {
  const fs::path checkpoint = opt.out_prefix + ".bnep";
  const fs::path codes_path = opt.out_prefix + ".bnec";
  const fs::path vocab_path = opt.out_prefix + ".vocab";
  try {
    Graph graph = load_edge_list(opt.edges);
    std::fprintf(stderr, "graph: %u nodes, %llu edges\n", graph.node_count(),
                 static_cast<unsigned long long>(graph.edge_count()));
    AttributeMatrix attrs;
    if (!opt.structure_only) {
      attrs = load_attributes(opt.attrs, graph);
      std::fprintf(stderr, "attributes: |A|=%u nnz=%llu\n", attrs.attr_count(),
                   static_cast<unsigned long long>(attrs.nnz()));
      if (attrs.nnz() == 0) {
        std::fprintf(stderr, "warning: empty attribute matrix, training on structure only\n");
      }
    }
    echo_walk_config(opt.walk);
    echo_train_config(opt.cfg);

    PairCounts counts = harvest_pairs(graph, opt.walk);

    TrainConfig cfg = opt.cfg;
    cfg.log_interval = opt.log_every;
    TrainStats stats;
    ProgressSink sink;
    if (cfg.log_interval > 0) {
      sink = [](const TrainProgress& p) {
        std::fprintf(stderr,
                     "iter %llu eta %.6g beta %.6g loss[s] %.4f loss[a] %.4f updates %llu/%llu\n",
                     static_cast<unsigned long long>(p.iter), p.eta, p.beta,
                     p.mean_structure_loss, p.mean_attribute_loss,
                     static_cast<unsigned long long>(p.structure_updates),
                     static_cast<unsigned long long>(p.attribute_updates));
      };
    }
    ModelParams params = train(graph, counts, attrs, cfg, sink, &stats);
    std::fprintf(stderr, "trained: alpha1=%.3g alpha2=%.3g updates %llu structure / %llu attribute\n",
                 stats.alpha1, stats.alpha2,
                 static_cast<unsigned long long>(stats.structure_updates),
                 static_cast<unsigned long long>(stats.attribute_updates));

    save_checkpoint(params, checkpoint);
    save_codes(binarize(params), codes_path);
    save_vocab(graph.external_ids(), vocab_path);
    std::fprintf(stderr, "wrote %s, %s, %s\n", checkpoint.c_str(), codes_path.c_str(),
                 vocab_path.c_str());
    return 0;
  } catch (...) {
    std::error_code ec;
    fs::remove(checkpoint, ec);
    fs::remove(codes_path, ec);
    fs::remove(vocab_path, ec);
    throw;
  }
}

int run_encode(const std::string& checkpoint, const std::string& codes_out) {
  ModelParams params = load_checkpoint(checkpoint);
  save_codes(binarize(params), codes_out);
  std::fprintf(stderr, "encoded %u nodes at %u bits\n", params.node_count(), params.dim());
  return 0;
}

int run_search(const SearchOptions& opt) {
  CodeMatrix codes = load_codes(opt.codes);
  std::vector<std::string> vocab = load_vocab(opt.vocab);
  if (vocab.size() != codes.node_count()) {
    throw std::runtime_error("vocabulary size does not match code matrix");
  }
  std::unordered_map<std::string, NodeId> index;
  index.reserve(vocab.size());
  for (NodeId v = 0; v < vocab.size(); ++v) index.emplace(vocab[v], v);

  std::vector<std::string> queries = opt.query_ids;
  if (!opt.queries_file.empty()) {
    std::ifstream in(opt.queries_file);
    if (!in) throw std::runtime_error("cannot open " + opt.queries_file);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) queries.push_back(line);
    }
  }
  if (queries.empty()) throw std::runtime_error("no query ids given");

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!opt.out.empty()) {
    file.open(opt.out);
    if (!file) throw std::runtime_error("cannot write " + opt.out);
    out = &file;
  }

  for (const std::string& qid : queries) {
    auto it = index.find(qid);
    if (it == index.end()) throw std::runtime_error("unknown query id '" + qid + "'");
    RankedResult result = top_k(codes, it->second, opt.k, !opt.include_self);
    for (std::size_t rank = 0; rank < result.entries.size(); ++rank) {
      const auto& e = result.entries[rank];
      (*out) << qid << '\t' << (rank + 1) << '\t' << vocab[e.node] << '\t'
             << static_cast<std::uint64_t>(e.distance) << '\n';
    }
    if (opt.timing) {
      std::fprintf(stderr, "query %s: %.3f ms\n", qid.c_str(),
                   std::chrono::duration<double, std::milli>(result.elapsed).count());
    }
  }
  return 0;
}

int run_eval(const EvalOptions& opt) {
  EvalConfig cfg;
  if (!opt.ks.empty()) cfg.ks = opt.ks;
  cfg.exclude_query = !opt.include_query;
  cfg.threads = opt.threads;

  CodeMatrix codes;
  LabelMap labels;
  if (!opt.codes.empty()) {
    codes = load_codes(opt.codes);
    std::vector<std::string> vocab = load_vocab(opt.vocab);
    if (vocab.size() != codes.node_count()) {
      throw std::runtime_error("vocabulary size does not match code matrix");
    }
    labels = load_labels(opt.labels, vocab);
  } else {
    Graph graph = load_edge_list(opt.feature_edges);
    AttributeMatrix attrs = load_attributes(opt.feature_attrs, graph);
    codes = feature_codes(attrs, graph.node_count());
    labels = load_labels(opt.labels, graph);
  }
  if (labels.labeled_count() == 0) throw std::runtime_error("label file labels no nodes");

  EvalReport report = run_benchmark(codes, labels, cfg);
  std::vector<ReportRow> rows{{opt.method, report}};
  if (opt.tsv) {
    std::cout << format_report_tsv(rows);
  } else {
    std::cout << format_report_table(rows);
  }
  if (report.degenerate_queries > 0) {
    std::fprintf(stderr, "note: %llu queries have no other node of their class\n",
                 static_cast<unsigned long long>(report.degenerate_queries));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BinaryNE: binary network embedding and Hamming-distance node search"};
  app.set_version_flag("--version", "binaryne 0.1.0");
  app.set_config("--config", "", "Flat key=value config file; flags take precedence");
  app.require_subcommand(1);

  WalkOptions walk_opt;
  auto* walks_cmd = app.add_subcommand("walks", "Generate random walks and context-pair counts");
  walks_cmd->add_option("--edges", walk_opt.edges, "Edge list file")->required();
  walks_cmd->add_option("--pairs", walk_opt.pairs_out, "Output pair-count file")->required();
  walks_cmd->add_option("--walk-dump", walk_opt.walk_dump, "Optional walk dump file");
  walks_cmd->add_option("--walk-length", walk_opt.cfg.walk_length, "Walk length L");
  walks_cmd->add_option("--walks-per-node", walk_opt.cfg.walks_per_node, "Walks per node gamma");
  walks_cmd->add_option("--window", walk_opt.cfg.window, "Context window t");
  walks_cmd->add_option("--seed", walk_opt.cfg.seed, "Random seed");
  walks_cmd->add_option("--threads", walk_opt.cfg.threads, "Worker threads");

  TrainOptions train_opt;
  auto* train_cmd = app.add_subcommand("train", "Train binary node embeddings");
  train_cmd->add_option("--edges", train_opt.edges, "Edge list file")->required();
  auto* attrs_opt = train_cmd->add_option("--attrs", train_opt.attrs, "Attribute triplet file");
  train_cmd->add_flag("--structure-only", train_opt.structure_only,
                      "Ignore attributes; train on structure alone");
  train_cmd->add_option("--out", train_opt.out_prefix,
                        "Output prefix for .bnep/.bnec/.vocab files")->required();
  train_cmd->add_option("--walk-length", train_opt.walk.walk_length, "Walk length L");
  train_cmd->add_option("--walks-per-node", train_opt.walk.walks_per_node, "Walks per node gamma");
  train_cmd->add_option("--window", train_opt.walk.window, "Context window t");
  train_cmd->add_option("--dim", train_opt.cfg.dim, "Embedding bits d");
  train_cmd->add_option("--iters", train_opt.cfg.max_iters, "SGD iterations");
  train_cmd->add_option("--negatives", train_opt.cfg.negatives, "Negative samples per update");
  train_cmd->add_option("--eta-start", train_opt.cfg.eta_start, "Initial learning rate");
  train_cmd->add_option("--eta-end", train_opt.cfg.eta_end, "Final learning rate");
  train_cmd->add_option("--beta-start", train_opt.cfg.beta_start, "Initial tanh sharpness");
  train_cmd->add_option("--beta-end", train_opt.cfg.beta_end, "Final tanh sharpness");
  train_cmd->add_option("--switch-prob", train_opt.cfg.switch_prob,
                        "Probability of taking the structure branch");
  train_cmd->add_option("--power", train_opt.cfg.noise_power,
                        "Noise distribution exponent for negative sampling");
  train_cmd->add_option("--grad-clip", train_opt.cfg.grad_clip,
                        "Gradient component clip (0 = off)");
  train_cmd->add_option("--seed", train_opt.cfg.seed, "Random seed");
  train_cmd->add_option("--threads", train_opt.cfg.threads,
                        "Worker threads (>1 is non-deterministic)");
  train_cmd->add_option("--log-every", train_opt.log_every,
                        "Progress log interval in iterations (0 = silent)");

  std::string encode_checkpoint, encode_codes;
  auto* encode_cmd = app.add_subcommand("encode", "Re-binarize an existing checkpoint");
  encode_cmd->add_option("--checkpoint", encode_checkpoint, "Checkpoint (.bnep)")->required();
  encode_cmd->add_option("--codes", encode_codes, "Output code file (.bnec)")->required();

  SearchOptions search_opt;
  auto* search_cmd = app.add_subcommand("search", "Top-K Hamming similarity search");
  search_cmd->add_option("--codes", search_opt.codes, "Code file (.bnec)")->required();
  search_cmd->add_option("--vocab", search_opt.vocab, "Vocabulary sidecar (.vocab)")->required();
  search_cmd->add_option("--queries", search_opt.queries_file, "File with one query id per line");
  search_cmd->add_option("--query", search_opt.query_ids, "Query id (repeatable)");
  search_cmd->add_option("-K,--top-k", search_opt.k, "Result count per query");
  search_cmd->add_flag("--include-self", search_opt.include_self,
                       "Keep the query node in its own results");
  search_cmd->add_flag("--timing", search_opt.timing, "Report per-query distance-pass time");
  search_cmd->add_option("--out", search_opt.out, "Output TSV file (default stdout)");

  EvalOptions eval_opt;
  auto* eval_cmd = app.add_subcommand("eval", "Precision@K / MAP@K retrieval evaluation");
  auto* eval_codes = eval_cmd->add_option("--codes", eval_opt.codes, "Code file (.bnec)");
  auto* eval_vocab = eval_cmd->add_option("--vocab", eval_opt.vocab, "Vocabulary sidecar");
  eval_cmd->add_option("--labels", eval_opt.labels, "Label file")->required();
  auto* eval_fe = eval_cmd->add_option("--feature-edges", eval_opt.feature_edges,
                                       "Edge list for the raw-feature baseline");
  auto* eval_fa = eval_cmd->add_option("--feature-attrs", eval_opt.feature_attrs,
                                       "Attribute file for the raw-feature baseline");
  eval_cmd->add_option("-K,--top-k", eval_opt.ks, "Evaluation cutoffs (repeatable)");
  eval_cmd->add_flag("--include-query", eval_opt.include_query,
                     "Keep the query node among candidates and denominators");
  eval_cmd->add_flag("--tsv", eval_opt.tsv, "Emit TSV instead of the aligned table");
  eval_cmd->add_option("--method", eval_opt.method, "Row label in the report");
  eval_cmd->add_option("--threads", eval_opt.threads, "Worker threads");
  eval_codes->needs(eval_vocab);
  eval_fe->needs(eval_fa);
  eval_fa->needs(eval_fe);
  eval_codes->excludes(eval_fe);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(walks_cmd)) return run_walks(walk_opt);
    if (app.got_subcommand(train_cmd)) {
      if (!train_opt.structure_only && attrs_opt->count() == 0) {
        std::fprintf(stderr, "error: --attrs is required unless --structure-only is given\n");
        return 2;
      }
      return run_train(train_opt);
    }
    if (app.got_subcommand(encode_cmd)) return run_encode(encode_checkpoint, encode_codes);
    if (app.got_subcommand(search_cmd)) return run_search(search_opt);
    if (app.got_subcommand(eval_cmd)) {
      if (eval_opt.codes.empty() && eval_opt.feature_edges.empty()) {
        std::fprintf(stderr, "error: give either --codes/--vocab or --feature-edges/--feature-attrs\n");
        return 2;
      }
      return run_eval(eval_opt);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
