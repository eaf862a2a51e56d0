#include "hetkg/graph.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace hetkg {

std::int32_t GraphSchema::node_type_index(const std::string& name) const {
  for (std::size_t i = 0; i < node_types.size(); ++i) {
    if (node_types[i] == name) return static_cast<std::int32_t>(i);
  }
  return -1;
}

std::int32_t GraphSchema::relation_index(const std::string& name) const {
  for (std::size_t i = 0; i < relation_types.size(); ++i) {
    if (relation_types[i] == name) return static_cast<std::int32_t>(i);
  }
  return -1;
}

void GraphSchema::validate() const {
  if (meta_relations.size() != relation_types.size()) {
    throw SchemaViolation("each relation needs exactly one meta relation");
  }
  std::vector<bool> seen(relation_types.size(), false);
  for (const auto& m : meta_relations) {
    if (m.relation < 0 || m.relation >= num_relations() || seen[m.relation]) {
      throw SchemaViolation("relation appears in more than one meta relation");
    }
    if (m.head_type < 0 || m.head_type >= num_node_types() || m.tail_type < 0 ||
        m.tail_type >= num_node_types()) {
      throw SchemaViolation("meta relation references unknown node type");
    }
    seen[m.relation] = true;
  }
  if (cardinality.size() != relation_types.size()) {
    throw SchemaViolation("cardinality must cover every relation");
  }
}

GraphSchema GraphSchema::news() {
  GraphSchema s;
  s.node_types = {"topic", "article", "paper", "author", "institute"};
  s.relation_types = {"cites", "has_topic", "is_author_of", "is_affiliated_with"};
  auto nt = [&s](const char* n) { return s.node_type_index(n); };
  s.meta_relations = {
      {nt("article"), 0, nt("paper")},
      {nt("article"), 1, nt("topic")},
      {nt("author"), 2, nt("paper")},
      {nt("author"), 3, nt("institute")},
  };
  // Affiliation edge count equals the author count in the source data, so it
  // behaves as one affiliation per author; everything else is many-to-many.
  s.cardinality = {Cardinality::many_to_many, Cardinality::many_to_many,
                   Cardinality::many_to_many, Cardinality::one_to_many};
  s.original_relation_count = 4;
  s.validate();
  return s;
}

TypedGraph::TypedGraph(GraphSchema schema, std::vector<std::vector<std::string>> labels,
                       std::vector<Triple> triples,
                       std::vector<std::vector<NodeAttributes>> attributes)
    : schema_(std::move(schema)), labels_(std::move(labels)) {
  schema_.validate();
  if (labels_.size() != static_cast<std::size_t>(schema_.num_node_types())) {
    throw SchemaViolation("label table must cover every node type");
  }
  attrs_ = std::move(attributes);
  attrs_.resize(labels_.size());
  for (std::size_t t = 0; t < labels_.size(); ++t) attrs_[t].resize(labels_[t].size());

  type_offsets_.resize(labels_.size() + 1, 0);
  for (std::size_t t = 0; t < labels_.size(); ++t) {
    type_offsets_[t + 1] = type_offsets_[t] + static_cast<std::int64_t>(labels_[t].size());
  }

  triples_.reserve(triples.size());
  for (const Triple& t : triples) {
    if (t.relation < 0 || t.relation >= schema_.num_relations()) {
      throw SchemaViolation("triple uses unknown relation index");
    }
    const auto& m = schema_.meta(t.relation);
    if (t.head.node_type != m.head_type || t.tail.node_type != m.tail_type) {
      throw SchemaViolation("triple endpoint types contradict meta relation for " +
                            schema_.relation_types[t.relation]);
    }
    if (t.head.local_id < 0 || t.head.local_id >= node_count(t.head.node_type) ||
        t.tail.local_id < 0 || t.tail.local_id >= node_count(t.tail.node_type)) {
      throw UnknownNode("triple references node outside the label table");
    }
    if (triple_set_.insert(t).second) {
      triples_.push_back(t);
    } else {
      ++duplicates_dropped_;
    }
  }

  std::int32_t nrel = schema_.num_relations();
  fwd_.resize(nrel);
  inv_.resize(nrel);
  edge_heads_.resize(nrel);
  edge_tails_.resize(nrel);
  for (std::int32_t r = 0; r < nrel; ++r) {
    const auto& m = schema_.meta(r);
    fwd_[r].resize(labels_[m.head_type].size());
    inv_[r].resize(labels_[m.tail_type].size());
  }
  for (const Triple& t : triples_) {
    fwd_[t.relation][t.head.local_id].push_back(t.tail.local_id);
    inv_[t.relation][t.tail.local_id].push_back(t.head.local_id);
  }
  for (std::int32_t r = 0; r < nrel; ++r) {
    for (auto& v : fwd_[r]) std::sort(v.begin(), v.end());
    for (auto& v : inv_[r]) std::sort(v.begin(), v.end());
    auto& hs = edge_heads_[r];
    auto& ts = edge_tails_[r];
    for (std::size_t h = 0; h < fwd_[r].size(); ++h) {
      for (std::int32_t tail : fwd_[r][h]) {
        hs.push_back(static_cast<std::int32_t>(h));
        ts.push_back(tail);
      }
    }
  }
}

std::int64_t TypedGraph::total_nodes() const { return type_offsets_.back(); }

const std::vector<std::int32_t>& TypedGraph::neighbors(NodeRef node, std::int32_t relation,
                                                       Direction dir) const {
  static const std::vector<std::int32_t> kEmpty;
  const auto& m = schema_.meta(relation);
  if (dir == Direction::forward) {
    if (node.node_type != m.head_type) return kEmpty;
    return fwd_[relation][node.local_id];
  }
  if (node.node_type != m.tail_type) return kEmpty;
  return inv_[relation][node.local_id];
}

std::vector<NodeRef> neighbors(const TypedGraph& g, NodeRef node, std::int32_t relation,
                               Direction dir) {
  const auto& m = g.schema().meta(relation);
  std::int32_t out_type = dir == Direction::forward ? m.tail_type : m.head_type;
  std::vector<NodeRef> out;
  for (std::int32_t id : g.neighbors(node, relation, dir)) out.push_back({out_type, id});
  return out;
}

namespace {

struct LoaderState {
  const GraphSchema& schema;
  std::vector<std::vector<std::string>> labels;
  std::vector<std::unordered_map<std::string, std::int32_t>> ids;

  explicit LoaderState(const GraphSchema& s)
      : schema(s), labels(s.num_node_types()), ids(s.num_node_types()) {}

  NodeRef intern(std::int32_t type, const std::string& label) {
    auto [it, inserted] = ids[type].try_emplace(label, static_cast<std::int32_t>(labels[type].size()));
    if (inserted) labels[type].push_back(label);
    return {type, it->second};
  }

  std::optional<NodeRef> lookup(std::int32_t type, const std::string& label) const {
    auto it = ids[type].find(label);
    if (it == ids[type].end()) return std::nullopt;
    return NodeRef{type, it->second};
  }
};

std::vector<std::string> split_tabs(const std::string& line, std::size_t max_fields) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (out.size() + 1 < max_fields) {
    std::size_t pos = line.find('\t', start);
    if (pos == std::string::npos) break;
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  out.push_back(line.substr(start));
  return out;
}

}  // namespace

std::int64_t parse_iso_date(const std::string& s) {
  int y = 0, m = 0, d = 0;
  char tail = 0;
  if (std::sscanf(s.c_str(), "%d-%d-%d%c", &y, &m, &d, &tail) != 3) {
    throw BadDate("unparseable date: " + s);
  }
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(m)},
                                  std::chrono::day{unsigned(d)}};
  if (!ymd.ok()) throw BadDate("invalid calendar date: " + s);
  return std::chrono::sys_days(ymd).time_since_epoch().count();
}

std::string format_iso_date(std::int64_t days) {
  std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{days}}};
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                unsigned(ymd.day()));
  return buf;
}

TypedGraph load_graph(const std::filesystem::path& edge_file,
                      const std::optional<std::filesystem::path>& attribute_file,
                      const GraphSchema& schema) {
  schema.validate();
  std::ifstream in(edge_file);
  if (!in) throw IoError("cannot open edge file " + edge_file.string());

  LoaderState state(schema);
  std::vector<Triple> triples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_tabs(line, 5);
    if (fields.size() != 5 || fields[4].find('\t') != std::string::npos) {
      throw MalformedRow(edge_file.string() + ":" + std::to_string(line_no) +
                         ": expected 5 tab-separated fields");
    }
    std::int32_t ht = schema.node_type_index(fields[0]);
    if (ht < 0) throw UnknownType("unknown node type '" + fields[0] + "' at line " + std::to_string(line_no));
    std::int32_t rel = schema.relation_index(fields[2]);
    if (rel < 0) throw UnknownType("unknown relation '" + fields[2] + "' at line " + std::to_string(line_no));
    std::int32_t tt = schema.node_type_index(fields[3]);
    if (tt < 0) throw UnknownType("unknown node type '" + fields[3] + "' at line " + std::to_string(line_no));
    const auto& m = schema.meta(rel);
    if (m.head_type != ht || m.tail_type != tt) {
      throw SchemaViolation("line " + std::to_string(line_no) + ": relation '" + fields[2] +
                            "' does not connect " + fields[0] + " -> " + fields[3]);
    }
    NodeRef head = state.intern(ht, fields[1]);
    NodeRef tail = state.intern(tt, fields[4]);
    triples.push_back({head, rel, tail});
  }
  if (triples.empty()) throw EmptyGraph("edge file " + edge_file.string() + " has no triples");

  std::vector<std::vector<NodeAttributes>> attrs(schema.num_node_types());
  for (std::size_t t = 0; t < attrs.size(); ++t) attrs[t].resize(state.labels[t].size());

  if (attribute_file) {
    std::ifstream ain(*attribute_file);
    if (!ain) throw IoError("cannot open attribute file " + attribute_file->string());
    line_no = 0;
    while (std::getline(ain, line)) {
      ++line_no;
      if (line.empty() || line[0] == '#') continue;
      auto fields = split_tabs(line, 4);
      if (fields.size() != 4) {
        throw MalformedRow(attribute_file->string() + ":" + std::to_string(line_no) +
                           ": expected 4 tab-separated fields");
      }
      std::int32_t nt = schema.node_type_index(fields[0]);
      if (nt < 0) throw UnknownType("unknown node type '" + fields[0] + "' at line " + std::to_string(line_no));
      auto node = state.lookup(nt, fields[1]);
      if (!node) {
        throw UnknownNode("attribute row references undeclared node '" + fields[1] + "' at line " +
                          std::to_string(line_no));
      }
      NodeAttributes& a = attrs[nt][node->local_id];
      if (fields[2] == "title") {
        a.title = fields[3];
      } else if (fields[2] == "published_date") {
        a.published_date = parse_iso_date(fields[3]);
      } else {
        throw MalformedRow(attribute_file->string() + ":" + std::to_string(line_no) +
                           ": unknown attribute key '" + fields[2] + "'");
      }
    }
  }

  return TypedGraph(schema, std::move(state.labels), std::move(triples), std::move(attrs));
}

void write_edge_list(const TypedGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  const auto& s = g.schema();
  for (const Triple& t : g.triples()) {
    out << s.node_types[t.head.node_type] << '\t' << g.label(t.head) << '\t'
        << s.relation_types[t.relation] << '\t' << s.node_types[t.tail.node_type] << '\t'
        << g.label(t.tail) << '\n';
  }
}

void write_attributes(const TypedGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  const auto& s = g.schema();
  for (std::int32_t t = 0; t < s.num_node_types(); ++t) {
    for (std::int32_t i = 0; i < g.node_count(t); ++i) {
      const NodeAttributes& a = g.attributes({t, i});
      if (a.title) {
        out << s.node_types[t] << '\t' << g.label({t, i}) << '\t' << "title" << '\t' << *a.title
            << '\n';
      }
      if (a.published_date) {
        out << s.node_types[t] << '\t' << g.label({t, i}) << '\t' << "published_date" << '\t'
            << format_iso_date(*a.published_date) << '\n';
      }
    }
  }
}

DegreeStats degree_stats(const TypedGraph& g) {
  DegreeStats stats;
  const auto& s = g.schema();
  for (std::int32_t r = 0; r < s.num_relations(); ++r) {
    const auto& m = s.meta(r);
    for (Direction dir : {Direction::forward, Direction::inverse}) {
      std::int32_t type = dir == Direction::forward ? m.head_type : m.tail_type;
      std::int64_t n = g.node_count(type);
      std::int64_t mn = std::numeric_limits<std::int64_t>::max(), mx = 0, total = 0;
      for (std::int32_t i = 0; i < n; ++i) {
        auto deg = static_cast<std::int64_t>(g.neighbors({type, i}, r, dir).size());
        mn = std::min(mn, deg);
        mx = std::max(mx, deg);
        total += deg;
      }
      if (n == 0) mn = 0;
      stats.entries.push_back({type, r, dir, total, mn, mx,
                               n > 0 ? static_cast<double>(total) / static_cast<double>(n) : 0.0});
    }
  }
  return stats;
}

TypedGraph augment_with_inverses(const TypedGraph& g) {
  if (g.schema().augmented) throw AlreadyAugmented("graph already has inverse relations");
  GraphSchema s = g.schema();
  std::int32_t orig = s.num_relations();
  for (std::int32_t r = 0; r < orig; ++r) {
    const auto& m = g.schema().meta(r);
    s.relation_types.push_back(s.relation_types[r] + "_inv");
    s.meta_relations.push_back({m.tail_type, orig + r, m.head_type});
    s.cardinality.push_back(s.cardinality[r]);
  }
  s.original_relation_count = orig;
  s.augmented = true;

  std::vector<Triple> triples = g.triples();
  triples.reserve(triples.size() * 2);
  for (const Triple& t : g.triples()) {
    triples.push_back({t.tail, orig + t.relation, t.head});
  }
  return TypedGraph(std::move(s), g.labels(), std::move(triples), g.all_attributes());
}

}  // namespace hetkg
