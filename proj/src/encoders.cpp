#include "hetkg/encoders.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace hetkg {

ModelKind parse_model_kind(const std::string& s) {
  if (s == "rgcn") return ModelKind::rgcn;
  if (s == "hetgnn") return ModelKind::hetgnn;
  if (s == "hgt") return ModelKind::hgt;
  throw ConfigError("unknown model kind '" + s + "'");
}

std::string model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::rgcn: return "rgcn";
    case ModelKind::hetgnn: return "hetgnn";
    case ModelKind::hgt: return "hgt";
  }
  return "?";
}

namespace {

Parameter& add_uniform(ParameterStore& s, const std::string& name, Eigen::Index rows,
                       Eigen::Index cols) {
  return s.get_or_add(name, rows, cols, [&]() {
    Rng rng(mix64(s.rng_seed(), fnv1a64(name)));
    double a = std::sqrt(6.0 / static_cast<double>(cols));
    Dense2D m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = (2.0 * rng.uniform() - 1.0) * a;
    return m;
  });
}

Parameter& add_constant(ParameterStore& s, const std::string& name, Eigen::Index rows,
                        Eigen::Index cols, double v) {
  return s.get_or_add(name, rows, cols,
                      [&]() { return Dense2D::Constant(rows, cols, v).eval(); });
}

std::vector<std::int32_t> iota32(std::size_t n) {
  std::vector<std::int32_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<std::int32_t>(i);
  return v;
}

}  // namespace

// --------------------------------------------------------------------------- R-GCN

RGCNParams RGCNParams::init(ParameterStore& store, const GraphSchema& schema, Eigen::Index dim) {
  RGCNParams p;
  p.self_weight = &add_uniform(store, "rgcn.self", dim, dim);
  for (const auto& rel : schema.relation_types) {
    p.rel_weight.push_back(&add_uniform(store, "rgcn.rel." + rel, dim, dim));
  }
  return p;
}

RGCNParams RGCNParams::view(ParameterStore& store, const GraphSchema& schema) {
  RGCNParams p;
  p.self_weight = &store.get("rgcn.self");
  for (const auto& rel : schema.relation_types) {
    p.rel_weight.push_back(&store.get("rgcn.rel." + rel));
  }
  return p;
}

Value rgcn_forward(Tape& tape, const TypedGraph& g, Value x_global, const RGCNParams& p,
                   double dropout_rate, std::uint64_t dropout_seed, bool training) {
  if (!g.schema().augmented) {
    throw SchemaViolation("rgcn_forward expects an inverse-augmented graph");
  }
  auto n_total = static_cast<Eigen::Index>(g.total_nodes());
  if (x_global.rows() != n_total) throw ShapeMismatch("rgcn_forward feature rows");

  Value total = tape.matmul(x_global, tape.leaf(*p.self_weight));
  for (std::int32_t r = 0; r < g.schema().num_relations(); ++r) {
    const auto& heads = g.edge_heads(r);
    const auto& tails = g.edge_tails(r);
    if (heads.empty()) continue;

    std::vector<std::int32_t> kept = iota32(heads.size());
    if (training && dropout_rate > 0.0) {
      kept = dropout_edges(kept, dropout_rate, mix64(dropout_seed, static_cast<std::uint64_t>(r)));
      if (kept.empty()) continue;
    }

    const auto& m = g.schema().meta(r);
    auto head_off = static_cast<std::int32_t>(g.type_offset(m.head_type));
    auto tail_off = static_cast<std::int32_t>(g.type_offset(m.tail_type));

    std::vector<std::int32_t> heads_g(kept.size()), tails_g(kept.size());
    std::vector<std::int32_t> in_degree(g.node_count(m.tail_type), 0);
    for (std::size_t k = 0; k < kept.size(); ++k) {
      heads_g[k] = head_off + heads[kept[k]];
      tails_g[k] = tail_off + tails[kept[k]];
      ++in_degree[tails[kept[k]]];
    }
    Vector norm(static_cast<Eigen::Index>(kept.size()));
    for (std::size_t k = 0; k < kept.size(); ++k) {
      norm[static_cast<Eigen::Index>(k)] = 1.0 / static_cast<double>(in_degree[tails[kept[k]]]);
    }

    Value msgs = tape.matmul(tape.gather_rows(x_global, heads_g), tape.leaf(*p.rel_weight[r]));
    Value scaled = tape.scale_rows_const(msgs, norm);
    total = tape.add(total, tape.segment_sum(scaled, tails_g, n_total));
  }
  return tape.relu(total);
}

// --------------------------------------------------------------------------- HetGNN

namespace {

GruCell init_gru(ParameterStore& store, const std::string& prefix, Eigen::Index dim) {
  GruCell c;
  c.w_update = &add_uniform(store, prefix + ".update", 2 * dim, dim);
  c.w_reset = &add_uniform(store, prefix + ".reset", 2 * dim, dim);
  c.w_cand = &add_uniform(store, prefix + ".cand", 2 * dim, dim);
  c.b_update = &add_constant(store, prefix + ".bias_update", 1, dim, 0.0);
  c.b_reset = &add_constant(store, prefix + ".bias_reset", 1, dim, 0.0);
  c.b_cand = &add_constant(store, prefix + ".bias_cand", 1, dim, 0.0);
  return c;
}

GruCell view_gru(ParameterStore& store, const std::string& prefix) {
  GruCell c;
  c.w_update = &store.get(prefix + ".update");
  c.w_reset = &store.get(prefix + ".reset");
  c.w_cand = &store.get(prefix + ".cand");
  c.b_update = &store.get(prefix + ".bias_update");
  c.b_reset = &store.get(prefix + ".bias_reset");
  c.b_cand = &store.get(prefix + ".bias_cand");
  return c;
}

Value gru_step(Tape& t, const GruCell& c, Value h, Value x) {
  Value hx = t.concat_cols({h, x});
  Value z = t.sigmoid(t.add_rowvec(t.matmul(hx, t.leaf(*c.w_update)), t.leaf(*c.b_update)));
  Value r = t.sigmoid(t.add_rowvec(t.matmul(hx, t.leaf(*c.w_reset)), t.leaf(*c.b_reset)));
  Value rhx = t.concat_cols({t.cmul(r, h), x});
  Value n = t.tanh(t.add_rowvec(t.matmul(rhx, t.leaf(*c.w_cand)), t.leaf(*c.b_cand)));
  // h' = (1 - z) * n + z * h
  return t.add(t.cmul(z, h), t.sub(n, t.cmul(z, n)));
}

}  // namespace

HetGNNParams HetGNNParams::init(ParameterStore& store, const GraphSchema& schema,
                                Eigen::Index dim, HetGnnConfig cfg) {
  HetGNNParams p;
  p.cfg = cfg;
  p.content = init_gru(store, "hetgnn.content", dim);
  for (const auto& t : schema.node_types) {
    p.neighbor.push_back(init_gru(store, "hetgnn.nbr." + t, dim));
  }
  p.type_attention = &add_uniform(store, "hetgnn.type_attention", 1, 2 * dim);
  return p;
}

HetGNNParams HetGNNParams::view(ParameterStore& store, const GraphSchema& schema,
                                HetGnnConfig cfg) {
  HetGNNParams p;
  p.cfg = cfg;
  p.content = view_gru(store, "hetgnn.content");
  for (const auto& t : schema.node_types) {
    p.neighbor.push_back(view_gru(store, "hetgnn.nbr." + t));
  }
  p.type_attention = &store.get("hetgnn.type_attention");
  return p;
}

HetGnnSamples hetgnn_sample_neighbors(const TypedGraph& g, const HetGnnConfig& cfg,
                                      std::uint64_t seed) {
  const auto& schema = g.schema();
  std::int32_t ntypes = schema.num_node_types();
  std::int32_t nrel = schema.original_relation_count > 0 ? schema.original_relation_count
                                                         : schema.num_relations();
  auto n_total = static_cast<std::size_t>(g.total_nodes());

  // undirected multigraph view over the original relations
  std::vector<std::vector<std::int32_t>> adj(n_total);
  for (std::int32_t r = 0; r < nrel; ++r) {
    const auto& m = schema.meta(r);
    auto ho = static_cast<std::int32_t>(g.type_offset(m.head_type));
    auto to = static_cast<std::int32_t>(g.type_offset(m.tail_type));
    const auto& hs = g.edge_heads(r);
    const auto& ts = g.edge_tails(r);
    for (std::size_t k = 0; k < hs.size(); ++k) {
      adj[ho + hs[k]].push_back(to + ts[k]);
      adj[to + ts[k]].push_back(ho + hs[k]);
    }
  }
  for (auto& v : adj) std::sort(v.begin(), v.end());

  std::vector<std::int32_t> gid_type(n_total);
  for (std::int32_t t = 0; t < ntypes; ++t) {
    for (std::int32_t i = 0; i < g.node_count(t); ++i) {
      gid_type[g.type_offset(t) + i] = t;
    }
  }

  HetGnnSamples out;
  out.by_node.resize(ntypes);
  for (std::int32_t t = 0; t < ntypes; ++t) {
    out.by_node[t].resize(g.node_count(t));
    for (std::int32_t i = 0; i < g.node_count(t); ++i) {
      auto v = static_cast<std::int32_t>(g.type_offset(t)) + i;
      Rng rng(mix64(seed, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(i)));
      std::unordered_map<std::int32_t, std::int32_t> visits;
      for (std::int32_t w = 0; w < cfg.walk_count; ++w) {
        std::int32_t cur = v;
        for (std::int32_t s = 0; s < cfg.walk_length; ++s) {
          if (rng.uniform() < cfg.rwr_restart) {
            cur = v;
          } else {
            const auto& nb = adj[cur];
            cur = nb.empty() ? v : nb[rng.below(nb.size())];
          }
          if (cur != v) ++visits[cur];
        }
      }
      auto& per_type = out.by_node[t][i];
      per_type.resize(ntypes);
      std::vector<std::vector<std::pair<std::int32_t, std::int32_t>>> buckets(ntypes);
      for (auto [gid, count] : visits) buckets[gid_type[gid]].emplace_back(gid, count);
      for (std::int32_t u = 0; u < ntypes; ++u) {
        auto& b = buckets[u];
        std::sort(b.begin(), b.end(), [](const auto& x, const auto& y) {
          if (x.second != y.second) return x.second > y.second;
          return x.first < y.first;
        });
        if (static_cast<std::int32_t>(b.size()) > cfg.rwr_samples) b.resize(cfg.rwr_samples);
        auto off = static_cast<std::int32_t>(g.type_offset(u));
        for (auto [gid, count] : b) per_type[u].push_back(gid - off);
        std::sort(per_type[u].begin(), per_type[u].end());
      }
    }
  }
  return out;
}

Value hetgnn_forward(Tape& tape, const TypedGraph& g, const FeatureProvider& features,
                     const HetGNNParams& p, const HetGnnSamples& samples, HetGnnDebug* debug,
                     double dropout_rate, std::uint64_t dropout_seed, bool training) {
  const HetGnnSamples* use = &samples;
  HetGnnSamples dropped;
  if (training && dropout_rate > 0.0) {
    if (!(dropout_rate < 1.0)) throw BadRate("dropout rate must be in [0,1)");
    dropped = samples;
    std::uint64_t counter = 0;
    for (auto& per_type : dropped.by_node) {
      for (auto& per_node : per_type) {
        for (auto& seq : per_node) {
          std::vector<std::int32_t> kept;
          for (std::int32_t nbr : seq) {
            if (counter_uniform(dropout_seed, counter++) >= dropout_rate) kept.push_back(nbr);
          }
          seq = std::move(kept);
        }
      }
    }
    use = &dropped;
  }
  const HetGnnSamples& active_samples = *use;
  const auto& schema = g.schema();
  std::int32_t ntypes = schema.num_node_types();
  auto n_total = static_cast<Eigen::Index>(g.total_nodes());
  Eigen::Index dim = features.dim();

  // content embedding per node: gated-recurrent pass over the attribute
  // vector sequence
  std::vector<Value> content_by_type(ntypes);
  for (std::int32_t t = 0; t < ntypes; ++t) {
    Eigen::Index n = g.node_count(t);
    auto plan = features.content_plan(tape, t);
    Value h0 = tape.constant(Dense2D::Zero(n, dim));
    Value h1 = gru_step(tape, p.content, h0, plan.step1);
    if (plan.step2_rows.empty()) {
      content_by_type[t] = h1;
      continue;
    }
    Value h_prev = tape.gather_rows(h1, plan.step2_rows);
    Value x2 = tape.gather_rows(tape.leaf(features.table(t)), plan.step2_rows);
    Value h2 = gru_step(tape, p.content, h_prev, x2);
    content_by_type[t] = tape.add(h1, tape.segment_sum(tape.sub(h2, h_prev), plan.step2_rows, n));
  }
  Value content = tape.concat_rows(content_by_type);

  // per neighbor type: gated-recurrent aggregation of sampled neighbor
  // content embeddings, in ascending (type, local_id) node order
  std::vector<Value> type_agg(ntypes);
  std::vector<Vector> present(ntypes, Vector::Zero(n_total));
  for (std::int32_t u = 0; u < ntypes; ++u) {
    std::int32_t max_len = 0;
    for (std::int32_t t = 0; t < ntypes; ++t) {
      for (std::int32_t i = 0; i < g.node_count(t); ++i) {
        auto len = static_cast<std::int32_t>(active_samples.by_node[t][i][u].size());
        max_len = std::max(max_len, len);
        if (len > 0) present[u][g.type_offset(t) + i] = 1.0;
      }
    }
    Value h = tape.constant(Dense2D::Zero(n_total, dim));
    for (std::int32_t step = 0; step < max_len; ++step) {
      std::vector<std::int32_t> active, inputs;
      for (std::int32_t t = 0; t < ntypes; ++t) {
        for (std::int32_t i = 0; i < g.node_count(t); ++i) {
          const auto& seq = active_samples.by_node[t][i][u];
          if (static_cast<std::int32_t>(seq.size()) > step) {
            active.push_back(static_cast<std::int32_t>(g.type_offset(t)) + i);
            inputs.push_back(seq[step]);
          }
        }
      }
      Value h_prev = tape.gather_rows(h, active);
      Value x_in = tape.gather_rows(content_by_type[u], inputs);
      Value h_new = gru_step(tape, p.neighbor[u], h_prev, x_in);
      h = tape.add(h, tape.segment_sum(tape.sub(h_new, h_prev), active, n_total));
    }
    type_agg[u] = h;
  }

  // attention over {self} and the node types with sampled neighbors
  Value u_att = tape.transpose(tape.leaf(*p.type_attention));  // 2*dim x 1
  std::vector<Value> logit_cols;
  logit_cols.push_back(
      tape.leaky_relu(tape.matmul(tape.concat_cols({content, content}), u_att), p.cfg.leaky_slope));
  for (std::int32_t u = 0; u < ntypes; ++u) {
    logit_cols.push_back(tape.leaky_relu(
        tape.matmul(tape.concat_cols({content, type_agg[u]}), u_att), p.cfg.leaky_slope));
  }
  Value logits = tape.concat_cols(logit_cols);
  Dense2D mask = Dense2D::Zero(n_total, ntypes + 1);
  for (std::int32_t u = 0; u < ntypes; ++u) {
    for (Eigen::Index i = 0; i < n_total; ++i) {
      if (present[u][i] == 0.0) mask(i, u + 1) = -1e30;
    }
  }
  Value weights = tape.softmax_rows(tape.add_constant(logits, mask));
  if (debug) debug->type_attention = weights.mat();

  Value out = tape.scale_rows(content, tape.cols(weights, 0, 1));
  for (std::int32_t u = 0; u < ntypes; ++u) {
    out = tape.add(out, tape.scale_rows(type_agg[u], tape.cols(weights, u + 1, 1)));
  }
  return out;
}

// --------------------------------------------------------------------------- HGT

HGTParams HGTParams::init(ParameterStore& store, const GraphSchema& schema, Eigen::Index dim,
                          std::int32_t head_count) {
  HGTParams p;
  p.head_count = head_count;
  for (const auto& t : schema.node_types) {
    p.key_proj.push_back(&add_uniform(store, "hgt.key." + t, dim, dim));
    p.query_proj.push_back(&add_uniform(store, "hgt.query." + t, dim, dim));
    p.value_proj.push_back(&add_uniform(store, "hgt.value." + t, dim, dim));
    p.out_proj.push_back(&add_uniform(store, "hgt.out." + t, dim, dim));
  }
  for (const auto& r : schema.relation_types) {
    p.att_rel.push_back(&add_uniform(store, "hgt.att." + r, dim, dim));
    p.msg_rel.push_back(&add_uniform(store, "hgt.msg." + r, dim, dim));
    p.prior.push_back(&add_constant(store, "hgt.prior." + r, 1, 1, 1.0));
  }
  return p;
}

HGTParams HGTParams::view(ParameterStore& store, const GraphSchema& schema,
                          std::int32_t head_count) {
  HGTParams p;
  p.head_count = head_count;
  for (const auto& t : schema.node_types) {
    p.key_proj.push_back(&store.get("hgt.key." + t));
    p.query_proj.push_back(&store.get("hgt.query." + t));
    p.value_proj.push_back(&store.get("hgt.value." + t));
    p.out_proj.push_back(&store.get("hgt.out." + t));
  }
  for (const auto& r : schema.relation_types) {
    p.att_rel.push_back(&store.get("hgt.att." + r));
    p.msg_rel.push_back(&store.get("hgt.msg." + r));
    p.prior.push_back(&store.get("hgt.prior." + r));
  }
  return p;
}

Value hgt_forward(Tape& tape, const TypedGraph& g, const FeatureProvider& features,
                  const TemporalEncoding& temporal, const HGTParams& p, HgtDebug* debug,
                  double dropout_rate, std::uint64_t dropout_seed, bool training) {
  if (!g.schema().augmented) {
    throw SchemaViolation("hgt_forward expects an inverse-augmented graph");
  }
  const auto& schema = g.schema();
  std::int32_t ntypes = schema.num_node_types();
  Eigen::Index dim = features.dim();
  if (p.head_count <= 0 || dim % p.head_count != 0) {
    throw HeadWidthError("head count " + std::to_string(p.head_count) + " must divide dim " +
                         std::to_string(dim));
  }
  Eigen::Index hw = dim / p.head_count;
  auto n_total = static_cast<Eigen::Index>(g.total_nodes());

  std::vector<Value> x_by_type(ntypes), keys(ntypes), queries(ntypes), values(ntypes);
  for (std::int32_t t = 0; t < ntypes; ++t) {
    Eigen::Index n = g.node_count(t);
    Value x = features.type_features(tape, t);
    x_by_type[t] = x;
    bool dated = false;
    for (std::int32_t i = 0; i < n && !dated; ++i) {
      dated = g.attributes({t, i}).published_date.has_value();
    }
    Value src = x;
    if (dated) {
      Dense2D enc(n, dim);
      for (std::int32_t i = 0; i < n; ++i) {
        auto d = g.attributes({t, i}).published_date.value_or(temporal.reference_date);
        enc.row(i) = temporal_encode(temporal, d).transpose();
      }
      src = tape.add_constant(x, enc);
    }
    keys[t] = tape.matmul(src, tape.leaf(*p.key_proj[t]));
    values[t] = tape.matmul(src, tape.leaf(*p.value_proj[t]));
    queries[t] = tape.matmul(x, tape.leaf(*p.query_proj[t]));
  }
  Value key_g = tape.concat_rows(keys);
  Value query_g = tape.concat_rows(queries);
  Value value_g = tape.concat_rows(values);

  std::vector<std::vector<Value>> logit_pieces(p.head_count);
  std::vector<Value> msg_pieces;
  std::vector<std::int32_t> all_tails;
  for (std::int32_t r = 0; r < schema.num_relations(); ++r) {
    const auto& heads = g.edge_heads(r);
    const auto& tails = g.edge_tails(r);
    if (heads.empty()) continue;
    std::vector<std::int32_t> kept = iota32(heads.size());
    if (training && dropout_rate > 0.0) {
      kept = dropout_edges(kept, dropout_rate, mix64(dropout_seed, static_cast<std::uint64_t>(r)));
      if (kept.empty()) continue;
    }
    const auto& m = schema.meta(r);
    auto ho = static_cast<std::int32_t>(g.type_offset(m.head_type));
    auto to = static_cast<std::int32_t>(g.type_offset(m.tail_type));
    std::vector<std::int32_t> heads_g(kept.size()), tails_g(kept.size());
    for (std::size_t k = 0; k < kept.size(); ++k) {
      heads_g[k] = ho + heads[kept[k]];
      tails_g[k] = to + tails[kept[k]];
    }
    Value k_e = tape.gather_rows(key_g, heads_g);
    Value q_e = tape.gather_rows(query_g, tails_g);
    Value u_e = tape.matmul(q_e, tape.transpose(tape.leaf(*p.att_rel[r])));
    Value m_e = tape.matmul(tape.gather_rows(value_g, heads_g),
                            tape.transpose(tape.leaf(*p.msg_rel[r])));
    Value ones = tape.constant(Dense2D::Ones(static_cast<Eigen::Index>(kept.size()), 1));
    Value mu = tape.matmul(ones, tape.leaf(*p.prior[r]));
    for (std::int32_t h = 0; h < p.head_count; ++h) {
      Value base = tape.row_dot(tape.cols(k_e, h * hw, hw), tape.cols(u_e, h * hw, hw));
      logit_pieces[h].push_back(
          tape.scale_const(tape.cmul(base, mu), 1.0 / std::sqrt(static_cast<double>(hw))));
    }
    msg_pieces.push_back(m_e);
    all_tails.insert(all_tails.end(), tails_g.begin(), tails_g.end());
  }

  Value agg;
  if (msg_pieces.empty()) {
    agg = tape.constant(Dense2D::Zero(n_total, dim));
  } else {
    Value msgs = tape.concat_rows(msg_pieces);
    std::vector<Value> head_aggs;
    for (std::int32_t h = 0; h < p.head_count; ++h) {
      Value logits = tape.concat_rows(logit_pieces[h]);
      Value att = tape.segment_softmax(logits, all_tails, n_total);
      if (debug) {
        const Dense2D& av = att.mat();
        for (std::size_t k = 0; k < all_tails.size(); ++k) {
          debug->attention.push_back({all_tails[k], h, av(static_cast<Eigen::Index>(k), 0)});
        }
      }
      Value weighted = tape.scale_rows(tape.cols(msgs, h * hw, hw), att);
      head_aggs.push_back(tape.segment_sum(weighted, all_tails, n_total));
    }
    agg = tape.concat_cols(head_aggs);
  }

  std::vector<Value> out_by_type(ntypes);
  for (std::int32_t t = 0; t < ntypes; ++t) {
    Eigen::Index n = g.node_count(t);
    std::vector<std::int32_t> rows(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      rows[i] = static_cast<std::int32_t>(g.type_offset(t) + i);
    }
    Value local = tape.gather_rows(agg, rows);
    out_by_type[t] = tape.add(tape.matmul(local, tape.leaf(*p.out_proj[t])), x_by_type[t]);
  }
  return tape.concat_rows(out_by_type);
}

// --------------------------------------------------------------------------- dispatch

Value encode(Tape& tape, ModelKind kind, const TypedGraph& g, const FeatureProvider& features,
             ParameterStore& store, const EncodeOptions& opts) {
  switch (kind) {
    case ModelKind::rgcn: {
      RGCNParams p = RGCNParams::view(store, g.schema());
      Value x = features.global_features(tape);
      return rgcn_forward(tape, g, x, p, opts.training ? opts.dropout_rate : 0.0,
                          opts.dropout_seed, opts.training);
    }
    case ModelKind::hetgnn: {
      HetGNNParams p = HetGNNParams::view(store, g.schema(), opts.hetgnn);
      HetGnnSamples drawn;
      const HetGnnSamples* samples = opts.samples;
      if (samples == nullptr) {
        drawn = hetgnn_sample_neighbors(g, opts.hetgnn, opts.sample_seed);
        samples = &drawn;
      }
      return hetgnn_forward(tape, g, features, p, *samples, nullptr,
                            opts.training ? opts.dropout_rate : 0.0, opts.dropout_seed,
                            opts.training);
    }
    case ModelKind::hgt: {
      HGTParams p = HGTParams::view(store, g.schema(), opts.head_count);
      TemporalEncoding te{features.dim(), features.config().reference_date,
                          features.config().scale_base};
      return hgt_forward(tape, g, features, te, p, nullptr,
                         opts.training ? opts.dropout_rate : 0.0, opts.dropout_seed,
                         opts.training);
    }
  }
  throw ConfigError("bad model kind");
}

}  // namespace hetkg
