#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "binaryne/graph.hpp"
#include "binaryne/sampler.hpp"
#include "binaryne/walks.hpp"

namespace binaryne {

// The three weight matrices. W_in is |V| x d row-major; the two output
// matrices are d x |V| and d x |A| with columns stored contiguously, since
// every update touches whole columns. Entries are 32-bit; all arithmetic on
// them is done in 64-bit.
class ModelParams {
 public:
  ModelParams(std::uint32_t node_count, std::uint32_t attr_count, std::uint32_t dim);

  // W_in uniform on [-0.5/d, +0.5/d], both output matrices zero.
  static ModelParams init(std::uint32_t node_count, std::uint32_t attr_count, std::uint32_t dim,
                          std::uint64_t seed);

  std::uint32_t node_count() const { return node_count_; }
  std::uint32_t attr_count() const { return attr_count_; }
  std::uint32_t dim() const { return dim_; }

  std::span<float> w_in_row(NodeId v) { return {w_in_.data() + std::size_t(v) * dim_, dim_}; }
  std::span<const float> w_in_row(NodeId v) const {
    return {w_in_.data() + std::size_t(v) * dim_, dim_};
  }
  std::span<float> w_out_s_col(NodeId v) {
    return {w_out_s_.data() + std::size_t(v) * dim_, dim_};
  }
  std::span<const float> w_out_s_col(NodeId v) const {
    return {w_out_s_.data() + std::size_t(v) * dim_, dim_};
  }
  std::span<float> w_out_a_col(std::uint32_t a) {
    return {w_out_a_.data() + std::size_t(a) * dim_, dim_};
  }
  std::span<const float> w_out_a_col(std::uint32_t a) const {
    return {w_out_a_.data() + std::size_t(a) * dim_, dim_};
  }

  std::span<const float> w_in() const { return w_in_; }
  std::span<const float> w_out_s() const { return w_out_s_; }
  std::span<const float> w_out_a() const { return w_out_a_; }
  std::span<float> w_in() { return w_in_; }
  std::span<float> w_out_s() { return w_out_s_; }
  std::span<float> w_out_a() { return w_out_a_; }

  bool all_finite() const;
  bool operator==(const ModelParams& other) const = default;

 private:
  std::uint32_t node_count_;
  std::uint32_t attr_count_;
  std::uint32_t dim_;
  std::vector<float> w_in_;
  std::vector<float> w_out_s_;
  std::vector<float> w_out_a_;
};

struct TrainConfig {
  std::uint32_t dim = 128;
  std::uint64_t max_iters = 100'000'000;
  std::uint32_t negatives = 5;  // K
  double eta_start = 0.025;
  double eta_end = 2.5e-6;
  double beta_start = 0.01;
  double beta_end = 1.0;
  double switch_prob = 0.5;   // structure branch taken when delta <= switch_prob
  double noise_power = 0.75;
  double grad_clip = 0.0;     // 0 = no clipping
  std::uint64_t seed = 1;
  std::uint32_t threads = 1;  // >1 enables hogwild updates (non-deterministic)
  std::uint64_t log_interval = 0;

  void validate() const;
};

// Learning-rate / sharpness schedules: eta decays linearly between its
// endpoints, beta grows geometrically between its endpoints.
std::pair<double, double> schedule(const TrainConfig& cfg, std::uint64_t iter);

// Relaxed hidden representation, component r = tanh(beta * W_in[v][r]),
// kept strictly inside (-1, 1).
std::vector<double> hidden_repr(const ModelParams& params, NodeId v, double beta);

// Negative-sampled partial objectives.
double structure_loss(const ModelParams& params, NodeId center, NodeId context,
                      std::span<const std::uint32_t> negatives, double beta);
double attribute_loss(const ModelParams& params, NodeId center, std::uint32_t attr,
                      std::span<const std::uint32_t> negatives, double beta);

// Gradients of one partial objective, evaluated at the current parameters.
// input_row is d(O)/d(W_in[center][:]); target_cols holds d(O)/d(column) for
// the positive target followed by each negative, flattened by dim.
struct SgnsGradients {
  std::vector<double> input_row;
  std::vector<std::uint32_t> targets;
  std::vector<double> target_cols;
  std::uint32_t dim = 0;

  std::span<const double> col(std::size_t t) const {
    return {target_cols.data() + t * dim, dim};
  }

  // Scratch reused across calls so the training loop does not allocate.
  std::vector<double> phi;
  std::vector<double> row_accum;
};

// When loss_out is given it receives the partial objective at the current
// parameters (a byproduct of the scores the gradients need anyway).
void structure_gradients(const ModelParams& params, NodeId center, NodeId context,
                         std::span<const std::uint32_t> negatives, double beta,
                         SgnsGradients& out, double grad_clip = 0.0, double* loss_out = nullptr);
void attribute_gradients(const ModelParams& params, NodeId center, std::uint32_t attr,
                         std::span<const std::uint32_t> negatives, double beta,
                         SgnsGradients& out, double grad_clip = 0.0, double* loss_out = nullptr);

// One SGD step on the corresponding partial objective: updates row `center`
// of W_in plus the 1+K touched output columns, nothing else. All column
// gradients use the pre-update hidden representation.
void sgd_step_structure(ModelParams& params, NodeId center, NodeId context,
                        std::span<const std::uint32_t> negatives, double eta, double beta,
                        double grad_clip = 0.0);
void sgd_step_attribute(ModelParams& params, NodeId center, std::uint32_t attr,
                        std::span<const std::uint32_t> negatives, double eta, double beta,
                        double grad_clip = 0.0);

struct TrainProgress {
  std::uint64_t iter = 0;
  double eta = 0.0;
  double beta = 0.0;
  double mean_structure_loss = 0.0;  // since the previous report
  double mean_attribute_loss = 0.0;
  std::uint64_t structure_updates = 0;
  std::uint64_t attribute_updates = 0;
};

struct TrainStats {
  double alpha1 = 0.0;  // 1 / total pair count
  double alpha2 = 0.0;  // 1 / total attribute mass (0 when no attributes)
  std::uint64_t structure_updates = 0;
  std::uint64_t attribute_updates = 0;
};

using ProgressSink = std::function<void(const TrainProgress&)>;

// Alternating negative-sampled SGD over the structure and attribute
// objectives. An empty attribute matrix forces the structure branch every
// iteration. Deterministic for threads == 1.
ModelParams train(const Graph& graph, const PairCounts& counts, const AttributeMatrix& attrs,
                  const TrainConfig& cfg, const ProgressSink& progress = {},
                  TrainStats* stats = nullptr);

// Checkpoint I/O. Layout: magic "BNEP", version u32, |V| u64, |A| u64,
// d u32 (little-endian), then W_in (|V| x d), W_out_s (d x |V|) and
// W_out_a (d x |A|) as row-major little-endian f32.
void save_checkpoint(const ModelParams& params, const std::filesystem::path& path);
ModelParams load_checkpoint(const std::filesystem::path& path);

}  // namespace binaryne
