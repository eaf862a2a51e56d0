#include "hetkg/gradcheck.hpp"

#include "hetkg/eval.hpp"
#include "hetkg/training.hpp"

namespace hetkg {

GradCheckKind parse_gradcheck_kind(const std::string& s) {
  if (s == "rgcn") return GradCheckKind::rgcn;
  if (s == "hetgnn") return GradCheckKind::hetgnn;
  if (s == "hgt") return GradCheckKind::hgt;
  if (s == "distmult") return GradCheckKind::distmult;
  if (s == "features") return GradCheckKind::features;
  throw ConfigError("unknown gradcheck path '" + s + "'");
}

std::string gradcheck_kind_name(GradCheckKind k) {
  switch (k) {
    case GradCheckKind::rgcn: return "rgcn";
    case GradCheckKind::hetgnn: return "hetgnn";
    case GradCheckKind::hgt: return "hgt";
    case GradCheckKind::distmult: return "distmult";
    case GradCheckKind::features: return "features";
  }
  return "?";
}

TypedGraph gradcheck_fixture() {
  GraphSchema schema = GraphSchema::news();
  std::int32_t t_topic = schema.node_type_index("topic");
  std::int32_t t_article = schema.node_type_index("article");
  std::int32_t t_paper = schema.node_type_index("paper");
  std::int32_t t_author = schema.node_type_index("author");
  std::int32_t t_inst = schema.node_type_index("institute");
  std::int32_t r_cites = schema.relation_index("cites");
  std::int32_t r_topic = schema.relation_index("has_topic");
  std::int32_t r_author = schema.relation_index("is_author_of");
  std::int32_t r_affil = schema.relation_index("is_affiliated_with");

  std::vector<std::vector<std::string>> labels(schema.num_node_types());
  labels[t_topic] = {"t0", "t1"};
  labels[t_article] = {"a0", "a1", "a2"};
  labels[t_paper] = {"p0", "p1"};
  labels[t_author] = {"u0", "u1"};
  labels[t_inst] = {"i0"};

  auto A = [&](std::int32_t i) { return NodeRef{t_article, i}; };
  auto P = [&](std::int32_t i) { return NodeRef{t_paper, i}; };
  auto T = [&](std::int32_t i) { return NodeRef{t_topic, i}; };
  auto U = [&](std::int32_t i) { return NodeRef{t_author, i}; };
  std::vector<Triple> triples = {
      {A(0), r_cites, P(0)},  {A(0), r_cites, P(1)},  {A(1), r_cites, P(1)},
      {A(2), r_cites, P(0)},  {A(0), r_topic, T(0)},  {A(1), r_topic, T(0)},
      {A(1), r_topic, T(1)},  {A(2), r_topic, T(1)},  {U(0), r_author, P(0)},
      {U(1), r_author, P(0)}, {U(1), r_author, P(1)}, {U(0), r_affil, {t_inst, 0}},
      {U(1), r_affil, {t_inst, 0}},
  };

  std::vector<std::vector<NodeAttributes>> attrs(schema.num_node_types());
  for (std::size_t t = 0; t < attrs.size(); ++t) attrs[t].resize(labels[t].size());
  attrs[t_article][0] = {"mrna vaccine trial shows strong response", 18506};
  attrs[t_article][1] = {"machine learning speeds protein folding", 18540};
  attrs[t_article][2] = {"recycled plastics reach new purity record", 18580};
  attrs[t_paper][0] = {"immunogenicity of mrna vaccines", std::nullopt};
  attrs[t_paper][1] = {"deep networks for structure prediction", std::nullopt};

  return TypedGraph(std::move(schema), std::move(labels), std::move(triples), std::move(attrs));
}

double gradcheck(GradCheckKind kind, Eigen::Index dim, std::uint64_t seed, std::size_t samples,
                 double epsilon) {
  if (dim > 16) {
    throw GuardError("gradcheck dim " + std::to_string(dim) +
                     " exceeds 16; finite differences would be too slow");
  }
  if (dim < 2 || dim % 2 != 0) throw GuardError("gradcheck dim must be even and >= 2");

  TypedGraph g = augment_with_inverses(gradcheck_fixture());

  TrainConfig cfg;
  cfg.dim = dim;
  cfg.seed = seed;
  cfg.negatives_per_positive = 2;
  cfg.head_count = 2;
  cfg.hetgnn.rwr_samples = 4;

  FeatureConfig fcfg;
  fcfg.dim = dim;
  switch (kind) {
    case GradCheckKind::rgcn:
    case GradCheckKind::distmult:
      fcfg.mode = FeatureMode::learned_table;
      cfg.model_kind = ModelKind::rgcn;
      cfg.mode = TrainMode::full_batch;
      break;
    case GradCheckKind::hetgnn:
      fcfg.mode = FeatureMode::title_text;
      cfg.model_kind = ModelKind::hetgnn;
      cfg.mode = TrainMode::mini_batch;
      break;
    case GradCheckKind::hgt:
      fcfg.mode = FeatureMode::title_text;
      cfg.model_kind = ModelKind::hgt;
      cfg.mode = TrainMode::mini_batch;
      break;
    case GradCheckKind::features:
      fcfg.mode = FeatureMode::hybrid;
      cfg.model_kind = ModelKind::rgcn;
      cfg.mode = TrainMode::full_batch;
      break;
  }

  bool use_encoder = kind == GradCheckKind::rgcn || kind == GradCheckKind::hetgnn ||
                     kind == GradCheckKind::hgt;

  ParameterStore store(cfg.seed);
  FeatureProvider provider(g, fcfg, store);
  if (use_encoder) {
    switch (cfg.model_kind) {
      case ModelKind::rgcn: RGCNParams::init(store, g.schema(), dim); break;
      case ModelKind::hetgnn: HetGNNParams::init(store, g.schema(), dim, cfg.hetgnn); break;
      case ModelKind::hgt: HGTParams::init(store, g.schema(), dim, cfg.head_count); break;
    }
  }
  DistMultParams::init(store, g.schema().original_relation_count, dim);

  HetGnnSamples samples_cache;
  EncodeOptions opts;
  opts.training = true;
  opts.dropout_rate = kind == GradCheckKind::rgcn ? 0.4 : 0.0;
  opts.dropout_seed = mix64(seed, fnv1a64("gradcheck-dropout"));
  opts.head_count = cfg.head_count;
  opts.hetgnn = cfg.hetgnn;
  if (kind == GradCheckKind::hetgnn) {
    samples_cache = hetgnn_sample_neighbors(g, cfg.hetgnn, mix64(seed, fnv1a64("rwr")));
    opts.samples = &samples_cache;
  }

  // fixed positive and negative triple batch
  std::vector<std::int32_t> pos_h, pos_r, pos_t, neg_h, neg_r, neg_t;
  std::uint64_t nonce = 0;
  for (const Triple& t : g.triples()) {
    if (t.relation >= g.schema().original_relation_count) continue;
    pos_h.push_back(g.global_id(t.head));
    pos_r.push_back(t.relation);
    pos_t.push_back(g.global_id(t.tail));
    for (const auto& n :
         sample_negatives(g, t, cfg.negatives_per_positive, mix64(seed, fnv1a64("neg")), nonce++)) {
      neg_h.push_back(g.global_id(n.triple.head));
      neg_r.push_back(n.triple.relation);
      neg_t.push_back(g.global_id(n.triple.tail));
    }
  }

  auto loss_fn = [&](ParameterStore& s) {
    Tape tape;
    Value emb = use_encoder ? encode(tape, cfg.model_kind, g, provider, s, opts)
                            : provider.global_features(tape);
    Value dm = tape.leaf(*DistMultParams::view(s).relations);
    Value sp = tape.score_triples(emb, dm, pos_h, pos_r, pos_t);
    Value sn = tape.score_triples(emb, dm, neg_h, neg_r, neg_t);
    Value loss = tape.add(tape.mean_all(tape.softplus(tape.scale_const(sp, -1.0))),
                          tape.mean_all(tape.softplus(sn)));
    tape.backward(loss);
    return loss.scalar();
  };

  if (epsilon <= 0.0) epsilon = kind == GradCheckKind::hetgnn ? 3e-4 : 1e-5;
  return finite_diff_check(loss_fn, store, epsilon, samples);
}

}  // namespace hetkg
