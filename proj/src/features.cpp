#include "hetkg/features.hpp"

#include <cctype>
#include <cmath>

namespace hetkg {

FeatureMode parse_feature_mode(const std::string& s) {
  if (s == "learned-table") return FeatureMode::learned_table;
  if (s == "title-text") return FeatureMode::title_text;
  if (s == "hybrid") return FeatureMode::hybrid;
  throw ConfigError("unknown features.mode '" + s + "'");
}

std::string feature_mode_name(FeatureMode m) {
  switch (m) {
    case FeatureMode::learned_table: return "learned-table";
    case FeatureMode::title_text: return "title-text";
    case FeatureMode::hybrid: return "hybrid";
  }
  return "?";
}

std::vector<Dense2D> init_embedding_table(const std::vector<std::int32_t>& node_counts,
                                          Eigen::Index dim, std::uint64_t seed) {
  if (dim <= 0) throw ConfigError("embedding dim must be positive");
  double a = std::sqrt(6.0 / static_cast<double>(dim));
  std::vector<Dense2D> tables;
  tables.reserve(node_counts.size());
  for (std::size_t t = 0; t < node_counts.size(); ++t) {
    Rng rng(mix64(seed, t));
    Dense2D m(node_counts[t], dim);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = (2.0 * rng.uniform() - 1.0) * a;
    tables.push_back(std::move(m));
  }
  return tables;
}

std::vector<std::string> tokenize_title(const std::string& title) {
  std::vector<std::string> tokens;
  std::string cur;
  for (unsigned char c : title) {
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

Dense2D title_token_vectors(const std::string& title, Eigen::Index dim, std::uint64_t token_seed) {
  auto tokens = tokenize_title(title);
  Dense2D out(static_cast<Eigen::Index>(tokens.size()), dim);
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    Rng rng(mix64(fnv1a64(tokens[k]), token_seed));
    Vector v(dim);
    for (Eigen::Index j = 0; j < dim; ++j) v[j] = rng.normal();
    double n = v.norm();
    if (n > 0) v /= n;
    out.row(static_cast<Eigen::Index>(k)) = v.transpose();
  }
  return out;
}

Vector embed_title(const TitleEmbedder& e, const std::string& title) {
  Dense2D toks = title_token_vectors(title, e.dim, e.token_seed);
  if (toks.rows() == 0) return Vector::Zero(e.dim);
  Vector logits = toks * e.attention_weights;
  Dense2D w = softmax_rows(logits.transpose());  // 1 x m
  return (w * toks).transpose().col(0);
}

Vector temporal_encode(const TemporalEncoding& t, std::int64_t date) {
  if (t.dim % 2 != 0) throw OddDim("temporal encoding needs an even dim");
  Vector out(t.dim);
  double delta = static_cast<double>(date - t.reference_date);
  for (Eigen::Index k = 0; k < t.dim / 2; ++k) {
    double freq = std::pow(t.scale_base, 2.0 * static_cast<double>(k) / static_cast<double>(t.dim));
    out[2 * k] = std::sin(delta / freq);
    out[2 * k + 1] = std::cos(delta / freq);
  }
  return out;
}

FeatureProvider::FeatureProvider(const TypedGraph& g, FeatureConfig cfg, ParameterStore& store)
    : graph_(g), cfg_(cfg) {
  std::int32_t ntypes = g.schema().num_node_types();
  std::vector<std::int32_t> counts(ntypes);
  for (std::int32_t t = 0; t < ntypes; ++t) counts[t] = g.node_count(t);

  tables_.resize(ntypes);
  for (std::int32_t t = 0; t < ntypes; ++t) {
    tables_[t] = &store.get_or_add("emb." + g.schema().node_types[t], counts[t], cfg_.dim,
                                   [&, t]() {
                                     return init_embedding_table(counts, cfg_.dim,
                                                                 mix64(store.rng_seed(), 0xE3Bull))[t];
                                   });
  }

  if (cfg_.mode != FeatureMode::learned_table) {
    attention_ = &store.get_or_add("title.attention", 1, cfg_.dim, [&]() {
      Rng rng(mix64(store.rng_seed(), fnv1a64("title.attention")));
      Dense2D m(1, cfg_.dim);
      double a = std::sqrt(6.0 / static_cast<double>(cfg_.dim));
      for (Eigen::Index j = 0; j < cfg_.dim; ++j) m(0, j) = (2.0 * rng.uniform() - 1.0) * a;
      return m;
    });
  }
  if (cfg_.mode == FeatureMode::hybrid) {
    hybrid_proj_ = &store.get_or_add("feat.hybrid_proj", 2 * cfg_.dim, cfg_.dim, [&]() {
      Rng rng(mix64(store.rng_seed(), fnv1a64("feat.hybrid_proj")));
      Dense2D m(2 * cfg_.dim, cfg_.dim);
      double a = std::sqrt(6.0 / static_cast<double>(2 * cfg_.dim));
      for (Eigen::Index j = 0; j < m.size(); ++j) m.data()[j] = (2.0 * rng.uniform() - 1.0) * a;
      return m;
    });
  }

  titled_mask_.resize(ntypes);
  token_mats_.resize(ntypes);
  token_segments_.resize(ntypes);
  for (std::int32_t t = 0; t < ntypes; ++t) {
    titled_mask_[t] = Vector::Zero(counts[t]);
    std::vector<Dense2D> per_node;
    std::int64_t total_rows = 0;
    for (std::int32_t i = 0; i < counts[t]; ++i) {
      const auto& attr = g.attributes({t, i});
      if (!attr.title || attr.title->empty()) continue;
      Dense2D toks = title_token_vectors(*attr.title, cfg_.dim, cfg_.token_seed);
      if (toks.rows() == 0) continue;
      titled_mask_[t][i] = 1.0;
      for (Eigen::Index k = 0; k < toks.rows(); ++k) token_segments_[t].push_back(i);
      total_rows += toks.rows();
      per_node.push_back(std::move(toks));
    }
    Dense2D stacked(total_rows, cfg_.dim);
    Eigen::Index at = 0;
    for (const auto& m : per_node) {
      stacked.middleRows(at, m.rows()) = m;
      at += m.rows();
    }
    token_mats_[t] = std::move(stacked);
  }
}

Value FeatureProvider::title_matrix(Tape& tape, std::int32_t type) const {
  Eigen::Index n = graph_.node_count(type);
  if (token_mats_[type].rows() == 0 || attention_ == nullptr) {
    return tape.constant(Dense2D::Zero(n, cfg_.dim));
  }
  Value toks = tape.constant(token_mats_[type]);
  Value logits = tape.matmul(toks, tape.transpose(tape.leaf(*attention_)));
  Value w = tape.segment_softmax(logits, token_segments_[type], n);
  Value weighted = tape.scale_rows(toks, w);
  return tape.segment_sum(weighted, token_segments_[type], n);
}

Value FeatureProvider::type_features(Tape& tape, std::int32_t type) const {
  Value learned = tape.leaf(*tables_[type]);
  switch (cfg_.mode) {
    case FeatureMode::learned_table:
      return learned;
    case FeatureMode::title_text: {
      // titled nodes use their title vector, the rest fall back to the table
      const Vector& mask = titled_mask_[type];
      if (mask.sum() == 0.0) return learned;
      Value titles = title_matrix(tape, type);
      Value a = tape.scale_rows_const(titles, mask);
      Value b = tape.scale_rows_const(learned, (1.0 - mask.array()).matrix());
      return tape.add(a, b);
    }
    case FeatureMode::hybrid: {
      Value titles = title_matrix(tape, type);
      Value both = tape.concat_cols({titles, learned});
      return tape.matmul(both, tape.leaf(*hybrid_proj_));
    }
  }
  throw ConfigError("bad feature mode");
}

Value FeatureProvider::global_features(Tape& tape) const {
  std::vector<Value> parts;
  for (std::int32_t t = 0; t < graph_.schema().num_node_types(); ++t) {
    parts.push_back(type_features(tape, t));
  }
  return tape.concat_rows(parts);
}

FeatureProvider::ContentPlan FeatureProvider::content_plan(Tape& tape, std::int32_t type) const {
  ContentPlan plan;
  Value learned = tape.leaf(*tables_[type]);
  if (cfg_.mode == FeatureMode::learned_table || titled_mask_[type].sum() == 0.0) {
    plan.step1 = learned;
    return plan;
  }
  const Vector& mask = titled_mask_[type];
  Value titles = title_matrix(tape, type);
  Value a = tape.scale_rows_const(titles, mask);
  Value b = tape.scale_rows_const(learned, (1.0 - mask.array()).matrix());
  plan.step1 = tape.add(a, b);
  for (std::int32_t i = 0; i < graph_.node_count(type); ++i) {
    if (mask[i] > 0.0) plan.step2_rows.push_back(i);
  }
  return plan;
}

}  // namespace hetkg
