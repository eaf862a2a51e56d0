#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hetkg/graph.hpp"
#include "hetkg/tape.hpp"

namespace hetkg {

enum class FeatureMode { learned_table, title_text, hybrid };

FeatureMode parse_feature_mode(const std::string& s);
std::string feature_mode_name(FeatureMode m);

// Scaled-uniform tables, entries in [-sqrt(6/dim), sqrt(6/dim)], one per node
// type, deterministic in (seed, type index).
std::vector<Dense2D> init_embedding_table(const std::vector<std::int32_t>& node_counts,
                                          Eigen::Index dim, std::uint64_t seed);

// Deterministic hash-based stand-in for a pretrained sentence encoder: each
// token maps to a fixed pseudo-random unit vector and the tokens are combined
// by a learned attention-weighted average.
struct TitleEmbedder {
  Eigen::Index dim;
  std::uint64_t token_seed;
  Vector attention_weights;  // width dim
};

std::vector<std::string> tokenize_title(const std::string& title);
// m x dim matrix of unit token vectors for a title; 0 rows for empty titles.
Dense2D title_token_vectors(const std::string& title, Eigen::Index dim, std::uint64_t token_seed);
Vector embed_title(const TitleEmbedder& e, const std::string& title);

// Sinusoidal encoding of (date - reference_date); every entry in [-1, 1].
struct TemporalEncoding {
  Eigen::Index dim;
  std::int64_t reference_date;  // days since epoch
  double scale_base = 10000.0;
};

Vector temporal_encode(const TemporalEncoding& t, std::int64_t date);

struct FeatureConfig {
  FeatureMode mode = FeatureMode::learned_table;
  Eigen::Index dim = 128;
  std::uint64_t token_seed = 0x7157A5EEDull;
  std::int64_t reference_date = 18475;  // 2020-08-01
  double scale_base = 10000.0;
};

// Resolves every node of every type to one width-dim vector (tape Value), and
// exposes the per-node attribute-vector sequences the content aggregator
// consumes. Learned tables and the title attention vector live in the
// ParameterStore; token vectors and temporal encodings are constants.
class FeatureProvider {
 public:
  FeatureProvider(const TypedGraph& g, FeatureConfig cfg, ParameterStore& store);

  const FeatureConfig& config() const { return cfg_; }
  Eigen::Index dim() const { return cfg_.dim; }

  // Single-vector view per node type (mode-dependent): n_t x dim.
  Value type_features(Tape& tape, std::int32_t type) const;
  // All types stacked in type order: total_nodes x dim.
  Value global_features(Tape& tape) const;

  // Title vectors for a type (zero rows for untitled nodes): n_t x dim.
  Value title_matrix(Tape& tape, std::int32_t type) const;
  // 1.0 for nodes of `type` that carry a title.
  const Vector& titled_mask(std::int32_t type) const { return titled_mask_[type]; }

  // Content sequences for the gated-recurrent content pass: step 1 input is
  // the title vector for titled nodes and the learned row otherwise; titled
  // nodes have a second step fed by their learned row. Under learned_table
  // mode every sequence is the single learned row.
  struct ContentPlan {
    Value step1;                            // n_t x dim
    std::vector<std::int32_t> step2_rows;   // local ids with a second element
  };
  ContentPlan content_plan(Tape& tape, std::int32_t type) const;

  Parameter& table(std::int32_t type) const { return *tables_[type]; }

 private:
  const TypedGraph& graph_;
  FeatureConfig cfg_;
  std::vector<Parameter*> tables_;
  Parameter* attention_ = nullptr;    // 1 x dim, title-text and hybrid modes
  Parameter* hybrid_proj_ = nullptr;  // 2*dim x dim, hybrid mode
  std::vector<Vector> titled_mask_;
  // Per type: stacked token vectors for all titled nodes plus the segment ids
  // mapping token rows to local node ids.
  std::vector<Dense2D> token_mats_;
  std::vector<std::vector<std::int32_t>> token_segments_;
};

}  // namespace hetkg
