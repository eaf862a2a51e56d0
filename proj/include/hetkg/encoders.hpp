#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hetkg/features.hpp"
#include "hetkg/graph.hpp"
#include "hetkg/tape.hpp"

namespace hetkg {

enum class ModelKind { rgcn, hetgnn, hgt };

ModelKind parse_model_kind(const std::string& s);
std::string model_kind_name(ModelKind k);

// ---------------------------------------------------------------------------
// R-GCN: single relational convolution layer. One projection per relation of
// the inverse-augmented schema plus a self-loop weight, mean-normalized by
// the retained in-neighbor count (normalization recomputed after edge
// dropout).

struct RGCNParams {
  Parameter* self_weight;
  std::vector<Parameter*> rel_weight;  // per augmented relation

  static RGCNParams init(ParameterStore& store, const GraphSchema& schema, Eigen::Index dim);
  static RGCNParams view(ParameterStore& store, const GraphSchema& schema);
};

Value rgcn_forward(Tape& tape, const TypedGraph& g, Value x_global, const RGCNParams& p,
                   double dropout_rate, std::uint64_t dropout_seed, bool training);

// ---------------------------------------------------------------------------
// HetGNN: gated-recurrent content encoding per node, gated-recurrent
// aggregation of sampled same-type neighbors, then attention over node types.

struct GruCell {
  Parameter* w_update;
  Parameter* w_reset;
  Parameter* w_cand;
  Parameter* b_update;
  Parameter* b_reset;
  Parameter* b_cand;
};

struct HetGnnConfig {
  double rwr_restart = 0.5;
  std::int32_t rwr_samples = 10;  // per-type neighbor budget
  std::int32_t walk_length = 20;
  std::int32_t walk_count = 10;
  double leaky_slope = 0.2;
};

struct HetGNNParams {
  GruCell content;
  std::vector<GruCell> neighbor;  // one per node type
  Parameter* type_attention;      // 1 x 2*dim
  HetGnnConfig cfg;

  static HetGNNParams init(ParameterStore& store, const GraphSchema& schema, Eigen::Index dim,
                           HetGnnConfig cfg = {});
  static HetGNNParams view(ParameterStore& store, const GraphSchema& schema,
                           HetGnnConfig cfg = {});
};

// Sampled neighbor lists: samples[node_type][local_id][neighbor_type] is the
// ascending list of neighbor local ids fed to the per-type aggregator.
struct HetGnnSamples {
  std::vector<std::vector<std::vector<std::vector<std::int32_t>>>> by_node;
};

// Random walk with restart over the original relations (both directions),
// top-k visited nodes per type by (visit count desc, id asc). Deterministic
// in (seed, node).
HetGnnSamples hetgnn_sample_neighbors(const TypedGraph& g, const HetGnnConfig& cfg,
                                      std::uint64_t seed);

struct HetGnnDebug {
  Dense2D type_attention;  // total_nodes x (1 + num types); column 0 is self
};

// Optional neighbor dropout (training only) independently drops sampled
// neighbors with probability dropout_rate, keyed by (seed, node, position).
Value hetgnn_forward(Tape& tape, const TypedGraph& g, const FeatureProvider& features,
                     const HetGNNParams& p, const HetGnnSamples& samples,
                     HetGnnDebug* debug = nullptr, double dropout_rate = 0.0,
                     std::uint64_t dropout_seed = 0, bool training = false);

// ---------------------------------------------------------------------------
// HGT: one typed-attention transformer layer with a residual. Source
// representations of dated node types carry a sinusoidal encoding of the
// published date; attention is normalized per target over all incoming edges
// across relations, per head.

struct HGTParams {
  std::vector<Parameter*> key_proj, query_proj, value_proj, out_proj;  // per node type
  std::vector<Parameter*> att_rel, msg_rel;                            // per augmented relation
  std::vector<Parameter*> prior;                                       // per relation, 1 x 1
  std::int32_t head_count = 4;

  static HGTParams init(ParameterStore& store, const GraphSchema& schema, Eigen::Index dim,
                        std::int32_t head_count = 4);
  static HGTParams view(ParameterStore& store, const GraphSchema& schema,
                        std::int32_t head_count = 4);
};

struct HgtDebug {
  // per edge record: (target gid, head index, attention weight)
  struct Att {
    std::int32_t target;
    std::int32_t head;
    double weight;
  };
  std::vector<Att> attention;
};

// Optional edge dropout (training only) removes edges before the attention
// softmax, so normalization runs over the retained edges.
Value hgt_forward(Tape& tape, const TypedGraph& g, const FeatureProvider& features,
                  const TemporalEncoding& temporal, const HGTParams& p, HgtDebug* debug = nullptr,
                  double dropout_rate = 0.0, std::uint64_t dropout_seed = 0,
                  bool training = false);

// ---------------------------------------------------------------------------

struct EncodeOptions {
  bool training = false;
  double dropout_rate = 0.0;
  std::uint64_t dropout_seed = 0;
  std::uint64_t sample_seed = 0;
  std::int32_t head_count = 4;
  HetGnnConfig hetgnn;
  // Injected neighbor samples (tests); when null they are drawn from
  // sample_seed.
  const HetGnnSamples* samples = nullptr;
};

// Dispatch to the architecture selected by `kind`; returns the global
// total_nodes x dim embedding matrix. Throws KindMismatch when the store does
// not hold that architecture's parameters.
Value encode(Tape& tape, ModelKind kind, const TypedGraph& g, const FeatureProvider& features,
             ParameterStore& store, const EncodeOptions& opts);

}  // namespace hetkg
