#pragma once

#include <cstdint>

#include "hetkg/graph.hpp"

namespace hetkg {

// Schema-compliant synthetic scientific-news graphs. Defaults replicate the
// published per-type node and per-relation edge counts exactly. With
// planted_blocks > 0 the article/paper/topic universe is partitioned into
// latent blocks (node index modulo block count) and article edges stay inside
// the block with probability 1 - planted_noise; inside each block, articles,
// papers and topic pairs share finer themes so that the held-out endpoint of
// an article edge is predictable from the article's remaining edges. Titles
// are drawn from per-theme vocabulary slices.
struct SynthConfig {
  std::int32_t topics = 23;
  std::int32_t articles = 472;
  std::int32_t papers = 1242;
  std::int32_t authors = 3464;
  std::int32_t institutes = 368;

  std::int32_t cites = 1421;
  std::int32_t has_topic = 1086;
  std::int32_t is_author_of = 3576;
  std::int32_t is_affiliated_with = 3464;

  std::uint64_t seed = 1;
  std::int32_t planted_blocks = 0;  // 0: no planted structure
  double planted_noise = 0.1;
  std::int32_t title_vocab_size = 500;

  void validate() const;  // throws InfeasibleCounts / ConfigError
};

TypedGraph generate(const SynthConfig& cfg);

// Block assignment used by the planted generator: node index modulo the
// block count (indices parse from the trailing digits of generated labels).
std::int32_t planted_block(std::int32_t node_index, std::int32_t blocks);

}  // namespace hetkg
