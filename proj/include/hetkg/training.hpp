#pragma once

#include <cstdint>
#include <vector>

#include "hetkg/encoders.hpp"

namespace hetkg {

// Per-relation diagonal decoder over the original (non-inverse) relations,
// stored as one num_relations x dim matrix.
struct DistMultParams {
  Parameter* relations;

  static DistMultParams init(ParameterStore& store, std::int32_t original_relations,
                             Eigen::Index dim);
  static DistMultParams view(ParameterStore& store);
};

// score = sum_k head[k] * rel[k] * tail[k]; symmetric in head and tail.
double distmult_score(const Vector& head, const Vector& rel, const Vector& tail);

// Type-constrained corruption: each negative replaces head or tail (fair
// coin, skipping exhausted sides) with a uniform node of the same type;
// corruptions that form a known-true triple are resampled up to 100 times,
// then kept with `collided` set. Deterministic in (seed, nonce).
struct NegativeSample {
  Triple triple;
  bool collided = false;
};

std::vector<NegativeSample> sample_negatives(const TypedGraph& g, const Triple& positive,
                                             std::int32_t n, std::uint64_t seed,
                                             std::uint64_t nonce);

// Negative-sampling binary cross-entropy: mean softplus(-s) over positives
// plus mean softplus(s) over negatives.
double bce_loss(const std::vector<double>& scores_pos, const std::vector<double>& scores_neg);

enum class TrainMode { full_batch, mini_batch };

struct TrainConfig {
  ModelKind model_kind = ModelKind::rgcn;
  TrainMode mode = TrainMode::full_batch;
  Eigen::Index dim = 128;
  std::int32_t epochs = -1;          // -1: 400 full-batch, 50 mini-batch
  double learning_rate = -1.0;       // -1: 0.01 full-batch, 0.001 mini-batch
  double dropout_rate = -1.0;        // -1: 0.4 for rgcn, 0 otherwise
  std::int32_t negatives_per_positive = 10;
  std::int32_t batch_size = 256;
  std::uint64_t seed = 42;
  double holdout_fraction = 0.0;     // validation holdout, excluded from training
  std::int32_t head_count = 4;
  HetGnnConfig hetgnn;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;

  std::int32_t resolved_epochs() const;
  double resolved_learning_rate() const;
  double resolved_dropout_rate() const;
  // full-batch iff rgcn; dropout only for rgcn; throws ConfigError.
  void validate() const;
};

struct LossReport {
  std::int32_t epoch;
  double loss;
  double positive_mean_score;
  double negative_mean_score;
};

struct TrainResult {
  ParameterStore store;
  std::vector<LossReport> trace;
};

// Registers every parameter the configured model needs (features, encoder,
// decoder) into a store seeded by cfg.seed.
ParameterStore build_parameter_store(const TypedGraph& g_augmented, const TrainConfig& cfg,
                                     const FeatureConfig& fcfg);

// Trains on all original-relation triples of `g_augmented` (an
// inverse-augmented graph). Full-batch: one encoder pass and one Adam step
// per epoch with fresh edge-dropout seeds and fresh negatives. Mini-batch:
// seeded shuffle, full-graph encode per batch, one Adam step per batch.
// Throws DivergedLoss when the loss goes non-finite.
TrainResult train(const TypedGraph& g_augmented, const TrainConfig& cfg,
                  const FeatureConfig& fcfg);

// Inference-mode embeddings (dropout off, sampling seeds fixed from
// cfg.seed): total_nodes x dim.
Dense2D encode_inference(const TypedGraph& g_augmented, const TrainConfig& cfg,
                         const FeatureConfig& fcfg, ParameterStore& store);

}  // namespace hetkg
