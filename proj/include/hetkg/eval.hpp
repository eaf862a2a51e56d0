#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "hetkg/graph.hpp"
#include "hetkg/training.hpp"

namespace hetkg {

// Fixed 5:1 train/test split: per relation (stratified) a seeded shuffle
// marks floor(count/6) triples as test.
struct SplitSpec {
  std::uint64_t seed = 0;
  bool stratified = true;
};

struct SplitResult {
  TypedGraph train;          // same node universe, test triples removed
  std::vector<Triple> test;  // invisible to message passing
};

SplitResult split_edges(const TypedGraph& g, const SplitSpec& spec);

enum class UseCase { A, B };  // A: cites, B: has_topic

enum class RankDirections { tail_only, both };

struct RankedResult {
  Triple triple;
  Direction direction;  // forward: tail was ranked; inverse: head was ranked
  std::int32_t filtered_rank;
  std::int32_t candidate_count;
};

// Tie-aware filtered rank of the true endpoint among all nodes of the
// endpoint type: candidates forming a known-true triple (other than the test
// triple itself) are removed, then
//   rank = 1 + |greater| + round_half_up(|equal| / 2).
std::int32_t rank_from_scores(const std::vector<double>& scores, std::size_t true_index,
                              const std::vector<char>& excluded);

RankedResult filtered_rank(const TypedGraph& g_full, const Dense2D& embeddings,
                           const Dense2D& relation_diagonals, const Triple& test_triple,
                           Direction direction);

struct MetricsReport {
  UseCase use_case;
  std::string model;
  double mrr = 0.0;
  std::map<std::int32_t, double> hits;  // keys 1, 3, 10
  std::vector<RankedResult> per_triple;

  void validate() const;  // hits monotone, mrr in (0,1], mrr >= hits@1
};

MetricsReport evaluate(const TypedGraph& g_full, const TypedGraph& g_train,
                       const std::vector<Triple>& test, const Dense2D& embeddings,
                       const Dense2D& relation_diagonals, UseCase use_case,
                       RankDirections directions, const std::string& model_name);

// One header line, then one `use_case,model,mrr,hits1,hits3,hits10` row per
// report.
void write_metrics_csv(const std::vector<MetricsReport>& reports,
                       const std::filesystem::path& path);
// Optional per-triple dump: head,relation,tail,direction,rank,candidates.
void write_rank_dump(const MetricsReport& report, const TypedGraph& g,
                     const std::filesystem::path& path);

std::int32_t use_case_relation(const GraphSchema& schema, UseCase uc);

}  // namespace hetkg
