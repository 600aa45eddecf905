#include "binaryne/model.hpp"

#include <atomic>
#include <cmath>
#include <cstring>
#include <mutex>
#include <optional>
#include <thread>

#include "binary_io.hpp"

namespace binaryne {

namespace {

constexpr std::uint64_t kInitStreamTag = 0x696e6974;   // "init"
constexpr std::uint64_t kTrainStreamTag = 0x7472696e;  // "trin"

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// -log(sigmoid(x)) = softplus(-x), overflow-safe on both tails.
double neg_log_sigmoid(double x) {
  if (x >= 0.0) return std::log1p(std::exp(-x));
  return -x + std::log1p(std::exp(x));
}

// tanh(beta * w), nudged off exact +-1 so components stay inside (-1, 1).
double relaxed_unit(double beta, double w) {
  double v = std::tanh(beta * w);
  if (v >= 1.0) v = std::nextafter(1.0, 0.0);
  if (v <= -1.0) v = std::nextafter(-1.0, 0.0);
  return v;
}

double clip(double g, double limit) {
  if (limit <= 0.0) return g;
  if (g > limit) return limit;
  if (g < -limit) return -limit;
  return g;
}

// Column accessor shared by the structure (context) and attribute output
// matrices; the loss/gradient math is identical for the two branches.
struct ColumnView {
  const float* base;
  std::uint32_t dim;
  const float* col(std::uint32_t c) const { return base + std::size_t(c) * dim; }
};

double sgns_loss(std::span<const float> in_row, ColumnView out, std::uint32_t positive,
                 std::span<const std::uint32_t> negatives, double beta) {
  const std::uint32_t d = out.dim;
  std::vector<double> phi(d);
  for (std::uint32_t r = 0; r < d; ++r) phi[r] = relaxed_unit(beta, in_row[r]);

  auto score = [&](std::uint32_t target) {
    const float* c = out.col(target);
    double s = 0.0;
    for (std::uint32_t r = 0; r < d; ++r) s += phi[r] * static_cast<double>(c[r]);
    return s;
  };

  double loss = neg_log_sigmoid(score(positive));
  for (std::uint32_t k : negatives) loss += neg_log_sigmoid(-score(k));
  return loss;
}

void sgns_gradients(std::span<const float> in_row, ColumnView out, std::uint32_t positive,
                    std::span<const std::uint32_t> negatives, double beta, SgnsGradients& g,
                    double grad_clip, double* loss_out) {
  const std::uint32_t d = out.dim;
  const std::size_t n_targets = 1 + negatives.size();
  g.dim = d;
  g.input_row.assign(d, 0.0);
  g.row_accum.assign(d, 0.0);
  g.phi.resize(d);
  g.targets.resize(n_targets);
  g.target_cols.resize(n_targets * d);
  g.targets[0] = positive;
  for (std::size_t t = 1; t < n_targets; ++t) g.targets[t] = negatives[t - 1];

  for (std::uint32_t r = 0; r < d; ++r) g.phi[r] = relaxed_unit(beta, in_row[r]);

  double loss = 0.0;
  for (std::size_t t = 0; t < n_targets; ++t) {
    const float* c = out.col(g.targets[t]);
    double s = 0.0;
    for (std::uint32_t r = 0; r < d; ++r) s += g.phi[r] * static_cast<double>(c[r]);
    if (!std::isfinite(s)) {
      throw std::runtime_error("non-finite score in SGD update (target " +
                               std::to_string(g.targets[t]) + ")");
    }
    const double label = (t == 0) ? 1.0 : 0.0;
    const double gt = sigmoid(s) - label;
    if (loss_out) loss += (t == 0) ? neg_log_sigmoid(s) : neg_log_sigmoid(-s);
    double* col_grad = g.target_cols.data() + t * d;
    for (std::uint32_t r = 0; r < d; ++r) {
      col_grad[r] = clip(gt * g.phi[r], grad_clip);
      g.row_accum[r] += gt * static_cast<double>(c[r]);
    }
  }
  for (std::uint32_t r = 0; r < d; ++r) {
    const double dphi = beta * (1.0 - g.phi[r] * g.phi[r]);
    g.input_row[r] = clip(dphi * g.row_accum[r], grad_clip);
  }
  if (loss_out) *loss_out = loss;
}

void apply_gradients(std::span<float> in_row, float* out_base, std::uint32_t dim,
                     const SgnsGradients& g, double eta) {
  for (std::size_t t = 0; t < g.targets.size(); ++t) {
    float* col = out_base + std::size_t(g.targets[t]) * dim;
    std::span<const double> col_grad = g.col(t);
    for (std::uint32_t r = 0; r < dim; ++r) {
      col[r] = static_cast<float>(static_cast<double>(col[r]) - eta * col_grad[r]);
    }
  }
  for (std::uint32_t r = 0; r < dim; ++r) {
    in_row[r] = static_cast<float>(static_cast<double>(in_row[r]) - eta * g.input_row[r]);
  }
}

}  // namespace

ModelParams::ModelParams(std::uint32_t node_count, std::uint32_t attr_count, std::uint32_t dim)
    : node_count_(node_count), attr_count_(attr_count), dim_(dim) {
  if (dim == 0) throw std::invalid_argument("embedding dimension must be >= 1");
  w_in_.assign(std::size_t(node_count) * dim, 0.0f);
  w_out_s_.assign(std::size_t(node_count) * dim, 0.0f);
  w_out_a_.assign(std::size_t(attr_count) * dim, 0.0f);
}

ModelParams ModelParams::init(std::uint32_t node_count, std::uint32_t attr_count,
                              std::uint32_t dim, std::uint64_t seed) {
  ModelParams p(node_count, attr_count, dim);
  Rng rng = Rng::stream(seed, 0, kInitStreamTag);
  const double half = 0.5 / static_cast<double>(dim);
  for (float& w : p.w_in_) w = static_cast<float>(rng.uniform(-half, half));
  return p;
}

bool ModelParams::all_finite() const {
  auto ok = [](std::span<const float> v) {
    for (float x : v) {
      if (!std::isfinite(x)) return false;
    }
    return true;
  };
  return ok(w_in_) && ok(w_out_s_) && ok(w_out_a_);
}

void TrainConfig::validate() const {
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (negatives < 1) throw std::invalid_argument("negatives must be >= 1");
  if (!(eta_start >= eta_end) || !(eta_end > 0.0)) {
    throw std::invalid_argument("require eta_start >= eta_end > 0");
  }
  if (!(beta_end >= beta_start) || !(beta_start > 0.0)) {
    throw std::invalid_argument("require beta_end >= beta_start > 0");
  }
  if (!(switch_prob >= 0.0 && switch_prob <= 1.0)) {
    throw std::invalid_argument("switch_prob must be in [0, 1]");
  }
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
}

std::pair<double, double> schedule(const TrainConfig& cfg, std::uint64_t iter) {
  const double frac = cfg.max_iters == 0
                          ? 0.0
                          : static_cast<double>(iter) / static_cast<double>(cfg.max_iters);
  const double eta = cfg.eta_start + (cfg.eta_end - cfg.eta_start) * frac;
  const double beta = cfg.beta_start * std::pow(cfg.beta_end / cfg.beta_start, frac);
  return {eta, beta};
}

std::vector<double> hidden_repr(const ModelParams& params, NodeId v, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
  std::span<const float> row = params.w_in_row(v);
  std::vector<double> phi(params.dim());
  for (std::uint32_t r = 0; r < params.dim(); ++r) phi[r] = relaxed_unit(beta, row[r]);
  return phi;
}

double structure_loss(const ModelParams& params, NodeId center, NodeId context,
                      std::span<const std::uint32_t> negatives, double beta) {
  return sgns_loss(params.w_in_row(center), {params.w_out_s().data(), params.dim()}, context,
                   negatives, beta);
}

double attribute_loss(const ModelParams& params, NodeId center, std::uint32_t attr,
                      std::span<const std::uint32_t> negatives, double beta) {
  return sgns_loss(params.w_in_row(center), {params.w_out_a().data(), params.dim()}, attr,
                   negatives, beta);
}

void structure_gradients(const ModelParams& params, NodeId center, NodeId context,
                         std::span<const std::uint32_t> negatives, double beta,
                         SgnsGradients& out, double grad_clip, double* loss_out) {
  sgns_gradients(params.w_in_row(center), {params.w_out_s().data(), params.dim()}, context,
                 negatives, beta, out, grad_clip, loss_out);
}

void attribute_gradients(const ModelParams& params, NodeId center, std::uint32_t attr,
                         std::span<const std::uint32_t> negatives, double beta,
                         SgnsGradients& out, double grad_clip, double* loss_out) {
  sgns_gradients(params.w_in_row(center), {params.w_out_a().data(), params.dim()}, attr,
                 negatives, beta, out, grad_clip, loss_out);
}

void sgd_step_structure(ModelParams& params, NodeId center, NodeId context,
                        std::span<const std::uint32_t> negatives, double eta, double beta,
                        double grad_clip) {
  SgnsGradients g;
  structure_gradients(params, center, context, negatives, beta, g, grad_clip);
  apply_gradients(params.w_in_row(center), params.w_out_s().data(), params.dim(), g, eta);
}

void sgd_step_attribute(ModelParams& params, NodeId center, std::uint32_t attr,
                        std::span<const std::uint32_t> negatives, double eta, double beta,
                        double grad_clip) {
  SgnsGradients g;
  attribute_gradients(params, center, attr, negatives, beta, g, grad_clip);
  apply_gradients(params.w_in_row(center), params.w_out_a().data(), params.dim(), g, eta);
}

namespace {

// Per-worker loop. One worker is the deterministic single-writer path; with
// several, updates land hogwild-style without synchronization and
// reproducibility is given up.
void train_worker(std::uint32_t worker, const TrainConfig& cfg, ModelParams& params,
                  const PairSampler& pairs, const NoiseDistribution& node_noise,
                  const AttributeSampler* attr_sampler, const NoiseDistribution* attr_noise,
                  std::atomic<std::uint64_t>& next_iter, const ProgressSink& progress,
                  TrainStats& stats, std::mutex& stats_mutex) {
  Rng rng = Rng::stream(cfg.seed, worker, kTrainStreamTag);
  SgnsGradients scratch;
  std::vector<std::uint32_t> negatives;
  const bool track_loss = cfg.log_interval > 0 && worker == 0 && static_cast<bool>(progress);
  double loss_value = 0.0;
  double* loss_ptr = track_loss ? &loss_value : nullptr;
  double structure_sum = 0.0, attribute_sum = 0.0;
  std::uint64_t structure_n = 0, attribute_n = 0;
  std::uint64_t local_structure = 0, local_attribute = 0, local_iters = 0;

  for (;;) {
    const std::uint64_t it = next_iter.fetch_add(1, std::memory_order_relaxed);
    if (it >= cfg.max_iters) break;
    const auto [eta, beta] = schedule(cfg, it);
    const double delta = rng.uniform();
    const bool structure = (attr_sampler == nullptr) || (delta <= cfg.switch_prob);

    if (structure) {
      const auto [vi, vj] = pairs.sample(rng);
      node_noise.draw_negatives(cfg.negatives, vj, rng, negatives);
      structure_gradients(params, vi, vj, negatives, beta, scratch, cfg.grad_clip, loss_ptr);
      apply_gradients(params.w_in_row(vi), params.w_out_s().data(), params.dim(), scratch, eta);
      ++local_structure;
      if (track_loss) {
        structure_sum += loss_value;
        ++structure_n;
      }
    } else {
      const auto [vi, aj] = attr_sampler->sample(rng);
      attr_noise->draw_negatives(cfg.negatives, aj, rng, negatives);
      attribute_gradients(params, vi, aj, negatives, beta, scratch, cfg.grad_clip, loss_ptr);
      apply_gradients(params.w_in_row(vi), params.w_out_a().data(), params.dim(), scratch, eta);
      ++local_attribute;
      if (track_loss) {
        attribute_sum += loss_value;
        ++attribute_n;
      }
    }

    ++local_iters;
    if (track_loss && local_iters % cfg.log_interval == 0) {
      TrainProgress p;
      p.iter = it + 1;
      p.eta = eta;
      p.beta = beta;
      p.mean_structure_loss = structure_n ? structure_sum / static_cast<double>(structure_n) : 0.0;
      p.mean_attribute_loss = attribute_n ? attribute_sum / static_cast<double>(attribute_n) : 0.0;
      p.structure_updates = local_structure;
      p.attribute_updates = local_attribute;
      progress(p);
      structure_sum = attribute_sum = 0.0;
      structure_n = attribute_n = 0;
    }
  }

  std::lock_guard<std::mutex> lock(stats_mutex);
  stats.structure_updates += local_structure;
  stats.attribute_updates += local_attribute;
}

}  // namespace

ModelParams train(const Graph& graph, const PairCounts& counts, const AttributeMatrix& attrs,
                  const TrainConfig& cfg, const ProgressSink& progress, TrainStats* stats_out) {
  cfg.validate();
  if (counts.empty()) throw std::invalid_argument("empty pair counts");

  ModelParams params =
      ModelParams::init(graph.node_count(), attrs.attr_count(), cfg.dim, cfg.seed);

  const PairSampler pairs(counts);
  const NoiseDistribution node_noise =
      NoiseDistribution::for_nodes(counts, graph.node_count(), cfg.noise_power);

  const bool use_attrs = attrs.nnz() > 0;
  std::optional<AttributeSampler> attr_sampler;
  std::optional<NoiseDistribution> attr_noise;
  if (use_attrs) {
    attr_sampler.emplace(attrs);
    attr_noise.emplace(NoiseDistribution::for_attributes(attrs, cfg.noise_power));
  }

  TrainStats stats;
  stats.alpha1 = counts.total() ? 1.0 / static_cast<double>(counts.total()) : 0.0;
  stats.alpha2 = use_attrs ? 1.0 / attrs.total_mass() : 0.0;

  std::atomic<std::uint64_t> next_iter{0};
  std::mutex stats_mutex;
  if (cfg.threads <= 1) {
    train_worker(0, cfg, params, pairs, node_noise, use_attrs ? &*attr_sampler : nullptr,
                 use_attrs ? &*attr_noise : nullptr, next_iter, progress, stats, stats_mutex);
  } else {
    std::vector<std::thread> pool;
    for (std::uint32_t t = 0; t < cfg.threads; ++t) {
      pool.emplace_back([&, t] {
        train_worker(t, cfg, params, pairs, node_noise, use_attrs ? &*attr_sampler : nullptr,
                     use_attrs ? &*attr_noise : nullptr, next_iter, progress, stats,
                     stats_mutex);
      });
    }
    for (auto& th : pool) th.join();
  }

  if (!params.all_finite()) {
    throw std::runtime_error("training produced non-finite parameters");
  }
  if (stats_out) *stats_out = stats;
  return params;
}

namespace {

constexpr char kCheckpointMagic[4] = {'B', 'N', 'E', 'P'};
constexpr std::uint32_t kCheckpointVersion = 1;

// The output matrices live column-contiguous in memory but are written in
// their declared d x n row-major order.
void write_transposed(std::ostream& out, std::span<const float> cols, std::uint32_t n,
                      std::uint32_t dim) {
  std::vector<float> row(n);
  for (std::uint32_t r = 0; r < dim; ++r) {
    for (std::uint32_t c = 0; c < n; ++c) row[c] = cols[std::size_t(c) * dim + r];
    io::write_f32_block(out, row.data(), n);
  }
}

void read_transposed(std::istream& in, std::span<float> cols, std::uint32_t n,
                     std::uint32_t dim) {
  std::vector<float> row(n);
  for (std::uint32_t r = 0; r < dim; ++r) {
    io::read_f32_block(in, row.data(), n);
    for (std::uint32_t c = 0; c < n; ++c) cols[std::size_t(c) * dim + r] = row[c];
  }
}

}  // namespace

void save_checkpoint(const ModelParams& params, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io::FileError("cannot write " + path.string());
  out.write(kCheckpointMagic, 4);
  io::write_u32(out, kCheckpointVersion);
  io::write_u64(out, params.node_count());
  io::write_u64(out, params.attr_count());
  io::write_u32(out, params.dim());
  io::write_f32_block(out, params.w_in().data(), params.w_in().size());
  write_transposed(out, params.w_out_s(), params.node_count(), params.dim());
  write_transposed(out, params.w_out_a(), params.attr_count(), params.dim());
  if (!out) throw io::FileError("i/o error while writing " + path.string());
}

ModelParams load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io::FileError("cannot open " + path.string());
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kCheckpointMagic, 4) != 0) {
    throw io::FileError("bad checkpoint magic in " + path.string());
  }
  const std::uint32_t version = io::read_u32(in);
  if (version != kCheckpointVersion) {
    throw io::FileError("unsupported checkpoint version " + std::to_string(version));
  }
  const std::uint64_t v = io::read_u64(in);
  const std::uint64_t a = io::read_u64(in);
  const std::uint32_t d = io::read_u32(in);
  if (!in || v > 0xffffffffull || a > 0xffffffffull || d == 0) {
    throw io::FileError("invalid checkpoint header in " + path.string());
  }
  ModelParams params(static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(a), d);
  io::read_f32_block(in, params.w_in().data(), params.w_in().size());
  read_transposed(in, params.w_out_s(), params.node_count(), d);
  read_transposed(in, params.w_out_a(), params.attr_count(), d);
  if (!in) throw io::FileError("truncated checkpoint " + path.string());
  in.peek();
  if (!in.eof()) throw io::FileError("trailing data in checkpoint " + path.string());
  return params;
}

}  // namespace binaryne
