#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "hetkg/error.hpp"

namespace hetkg {

enum class Cardinality { one_to_many, many_to_many };
enum class Direction { forward, inverse };

// Node types, relation types and the (head type, relation, tail type) meta
// relations they must respect.
struct GraphSchema {
  struct MetaRelation {
    std::int32_t head_type;
    std::int32_t relation;
    std::int32_t tail_type;
  };

  std::vector<std::string> node_types;
  std::vector<std::string> relation_types;
  std::vector<MetaRelation> meta_relations;  // exactly one entry per relation
  std::vector<Cardinality> cardinality;      // per relation
  // Number of relations before inverse augmentation; equals
  // relation_types.size() for unaugmented schemas.
  std::int32_t original_relation_count = 0;
  bool augmented = false;

  std::int32_t node_type_index(const std::string& name) const;
  std::int32_t relation_index(const std::string& name) const;
  const MetaRelation& meta(std::int32_t relation) const { return meta_relations[relation]; }
  std::int32_t num_node_types() const { return static_cast<std::int32_t>(node_types.size()); }
  std::int32_t num_relations() const { return static_cast<std::int32_t>(relation_types.size()); }

  void validate() const;

  // The scientific-news schema: topic/article/paper/author/institute with
  // cites, has_topic, is_author_of, is_affiliated_with.
  static GraphSchema news();
};

struct NodeRef {
  std::int32_t node_type = -1;
  std::int32_t local_id = -1;

  friend bool operator==(const NodeRef&, const NodeRef&) = default;
  friend auto operator<=>(const NodeRef&, const NodeRef&) = default;
};

struct Triple {
  NodeRef head;
  std::int32_t relation = -1;
  NodeRef tail;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint64_t v : {static_cast<std::uint64_t>(t.head.node_type),
                            static_cast<std::uint64_t>(t.head.local_id),
                            static_cast<std::uint64_t>(t.relation),
                            static_cast<std::uint64_t>(t.tail.node_type),
                            static_cast<std::uint64_t>(t.tail.local_id)}) {
      h = (h ^ v) * 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

struct NodeAttributes {
  std::optional<std::string> title;
  std::optional<std::int64_t> published_date;  // days since 1970-01-01
};

// Per (relation, direction) degree summary used by the stats report.
struct DegreeStats {
  struct Entry {
    std::int32_t node_type;
    std::int32_t relation;
    Direction direction;
    std::int64_t triple_count;
    std::int64_t min_degree;
    std::int64_t max_degree;
    double mean_degree;
  };
  std::vector<Entry> entries;
};

// Immutable typed multigraph with per-relation forward and inverse adjacency.
// Construction validates against the schema; after that the structure is
// read-only and safe for concurrent readers.
class TypedGraph {
 public:
  // `triples` may contain duplicates; they are collapsed and counted.
  TypedGraph(GraphSchema schema, std::vector<std::vector<std::string>> labels,
             std::vector<Triple> triples,
             std::vector<std::vector<NodeAttributes>> attributes = {});

  const GraphSchema& schema() const { return schema_; }
  std::int32_t node_count(std::int32_t type) const {
    return static_cast<std::int32_t>(labels_[type].size());
  }
  std::int64_t total_nodes() const;
  std::int64_t total_triples() const { return static_cast<std::int64_t>(triples_.size()); }
  const std::vector<Triple>& triples() const { return triples_; }
  const std::string& label(NodeRef n) const { return labels_[n.node_type][n.local_id]; }
  const std::vector<std::vector<std::string>>& labels() const { return labels_; }
  const NodeAttributes& attributes(NodeRef n) const { return attrs_[n.node_type][n.local_id]; }
  const std::vector<std::vector<NodeAttributes>>& all_attributes() const { return attrs_; }
  std::int64_t duplicates_dropped() const { return duplicates_dropped_; }

  bool contains(const Triple& t) const { return triple_set_.count(t) > 0; }

  const std::vector<std::int32_t>& neighbors(NodeRef node, std::int32_t relation,
                                             Direction dir) const;

  // Canonical per-relation edge arrays sorted by (head, tail); the stable
  // edge indexing used for dropout and message passing.
  const std::vector<std::int32_t>& edge_heads(std::int32_t relation) const {
    return edge_heads_[relation];
  }
  const std::vector<std::int32_t>& edge_tails(std::int32_t relation) const {
    return edge_tails_[relation];
  }
  std::int64_t relation_count(std::int32_t relation) const {
    return static_cast<std::int64_t>(edge_heads_[relation].size());
  }

  // Dense global node ids: global_id = type_offset(type) + local_id.
  std::int64_t type_offset(std::int32_t type) const { return type_offsets_[type]; }
  std::int32_t global_id(NodeRef n) const {
    return static_cast<std::int32_t>(type_offsets_[n.node_type]) + n.local_id;
  }

 private:
  GraphSchema schema_;
  std::vector<std::vector<std::string>> labels_;
  std::vector<std::vector<NodeAttributes>> attrs_;
  std::vector<Triple> triples_;
  std::unordered_set<Triple, TripleHash> triple_set_;
  // adjacency_[relation]: forward indexed by head local id, inverse by tail.
  std::vector<std::vector<std::vector<std::int32_t>>> fwd_, inv_;
  std::vector<std::vector<std::int32_t>> edge_heads_, edge_tails_;
  std::vector<std::int64_t> type_offsets_;
  std::int64_t duplicates_dropped_ = 0;
};

// Edge-list format: head_type \t head_id \t relation \t tail_type \t tail_id.
// Attribute format: node_type \t node_id \t key \t value with keys `title`
// and `published_date` (ISO-8601). `#` lines are comments. Node ids are
// densely renumbered per type in first-appearance order.
TypedGraph load_graph(const std::filesystem::path& edge_file,
                      const std::optional<std::filesystem::path>& attribute_file,
                      const GraphSchema& schema);

void write_edge_list(const TypedGraph& g, const std::filesystem::path& path);
void write_attributes(const TypedGraph& g, const std::filesystem::path& path);

// Neighbors in deterministic ascending local_id order; empty when the node's
// type does not match the queried endpoint or it has no neighbors.
std::vector<NodeRef> neighbors(const TypedGraph& g, NodeRef node, std::int32_t relation,
                               Direction dir);

DegreeStats degree_stats(const TypedGraph& g);

// Adds a distinct relation `<r>_inv` with transposed triples for every
// relation, doubling the schema. Message passing needs the reverse edges;
// decoders keep scoring original relations only. Augmenting twice throws
// AlreadyAugmented.
TypedGraph augment_with_inverses(const TypedGraph& g);

std::int64_t parse_iso_date(const std::string& s);    // days since epoch; throws BadDate
std::string format_iso_date(std::int64_t days);

}  // namespace hetkg
