#include "hetkg/training.hpp"

#include <algorithm>
#include <cmath>

namespace hetkg {

DistMultParams DistMultParams::init(ParameterStore& store, std::int32_t original_relations,
                                    Eigen::Index dim) {
  DistMultParams p;
  p.relations = &store.get_or_add("distmult.relations", original_relations, dim, [&]() {
    Rng rng(mix64(store.rng_seed(), fnv1a64("distmult.relations")));
    double a = std::sqrt(6.0 / static_cast<double>(dim));
    Dense2D m(original_relations, dim);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = (2.0 * rng.uniform() - 1.0) * a;
    return m;
  });
  return p;
}

DistMultParams DistMultParams::view(ParameterStore& store) {
  DistMultParams p;
  p.relations = &store.get("distmult.relations");
  return p;
}

double distmult_score(const Vector& head, const Vector& rel, const Vector& tail) {
  if (head.size() != rel.size() || head.size() != tail.size()) {
    throw ShapeMismatch("distmult_score widths differ");
  }
  return head.cwiseProduct(rel).dot(tail);
}

std::vector<NegativeSample> sample_negatives(const TypedGraph& g, const Triple& positive,
                                             std::int32_t n, std::uint64_t seed,
                                             std::uint64_t nonce) {
  if (n < 1) throw ConfigError("negatives_per_positive must be >= 1");
  std::int32_t head_pool = g.node_count(positive.head.node_type);
  std::int32_t tail_pool = g.node_count(positive.tail.node_type);
  bool head_ok = head_pool > 1;
  bool tail_ok = tail_pool > 1;
  if (!head_ok && !tail_ok) {
    throw TypeExhausted("cannot corrupt (" + g.label(positive.head) + ", " +
                        g.schema().relation_types[positive.relation] + ", " +
                        g.label(positive.tail) + "): both endpoint types have a single node");
  }

  Rng rng(mix64(seed, nonce));
  std::vector<NegativeSample> out;
  out.reserve(n);
  for (std::int32_t i = 0; i < n; ++i) {
    NegativeSample neg;
    neg.triple = positive;
    for (std::int32_t attempt = 0;; ++attempt) {
      bool corrupt_head;
      if (head_ok && tail_ok) {
        corrupt_head = rng.uniform() < 0.5;
      } else {
        corrupt_head = head_ok;
      }
      Triple cand = positive;
      if (corrupt_head) {
        cand.head.local_id = static_cast<std::int32_t>(rng.below(head_pool));
      } else {
        cand.tail.local_id = static_cast<std::int32_t>(rng.below(tail_pool));
      }
      if (!g.contains(cand)) {
        neg.triple = cand;
        neg.collided = false;
        break;
      }
      if (attempt >= 99) {
        neg.triple = cand;
        neg.collided = true;
        break;
      }
    }
    out.push_back(neg);
  }
  return out;
}

double bce_loss(const std::vector<double>& scores_pos, const std::vector<double>& scores_neg) {
  if (scores_pos.empty() || scores_neg.empty()) {
    throw ConfigError("bce_loss needs non-empty score lists");
  }
  double lp = 0.0, ln = 0.0;
  for (double s : scores_pos) lp += softplus(-s);
  for (double s : scores_neg) ln += softplus(s);
  return lp / static_cast<double>(scores_pos.size()) + ln / static_cast<double>(scores_neg.size());
}

std::int32_t TrainConfig::resolved_epochs() const {
  if (epochs >= 0) return epochs;
  return mode == TrainMode::full_batch ? 400 : 50;
}

double TrainConfig::resolved_learning_rate() const {
  if (learning_rate >= 0.0) return learning_rate;
  return mode == TrainMode::full_batch ? 0.01 : 0.001;
}

double TrainConfig::resolved_dropout_rate() const {
  if (dropout_rate >= 0.0) return dropout_rate;
  return model_kind == ModelKind::rgcn ? 0.4 : 0.0;
}

void TrainConfig::validate() const {
  bool full = mode == TrainMode::full_batch;
  if (full != (model_kind == ModelKind::rgcn)) {
    throw ConfigError("full-batch mode is for rgcn and mini-batch for the content-aware models");
  }
  double dr = resolved_dropout_rate();
  if (!(dr >= 0.0 && dr < 1.0)) throw ConfigError("dropout_rate must be in [0,1)");
  if (dim <= 0) throw ConfigError("dim must be positive");
  if (negatives_per_positive < 1) throw ConfigError("negatives_per_positive must be >= 1");
  if (mode == TrainMode::mini_batch && batch_size < 1) {
    throw ConfigError("batch_size must be >= 1");
  }
  if (!(holdout_fraction >= 0.0 && holdout_fraction < 1.0)) {
    throw ConfigError("holdout_fraction must be in [0,1)");
  }
  if (model_kind == ModelKind::hgt && dim % head_count != 0) {
    throw ConfigError("head_count must divide dim");
  }
}

ParameterStore build_parameter_store(const TypedGraph& g, const TrainConfig& cfg,
                                     const FeatureConfig& fcfg) {
  cfg.validate();
  ParameterStore store(cfg.seed);
  FeatureProvider provider(g, fcfg, store);  // registers tables + title params
  switch (cfg.model_kind) {
    case ModelKind::rgcn:
      RGCNParams::init(store, g.schema(), cfg.dim);
      break;
    case ModelKind::hetgnn:
      HetGNNParams::init(store, g.schema(), cfg.dim, cfg.hetgnn);
      break;
    case ModelKind::hgt:
      HGTParams::init(store, g.schema(), cfg.dim, cfg.head_count);
      break;
  }
  std::int32_t orig = g.schema().original_relation_count > 0 ? g.schema().original_relation_count
                                                             : g.schema().num_relations();
  DistMultParams::init(store, orig, cfg.dim);
  return store;
}

namespace {

struct PositiveSet {
  std::vector<Triple> triples;
};

PositiveSet collect_positives(const TypedGraph& g, const TrainConfig& cfg) {
  std::int32_t orig = g.schema().original_relation_count;
  PositiveSet ps;
  for (const Triple& t : g.triples()) {
    if (t.relation < orig) ps.triples.push_back(t);
  }
  if (cfg.holdout_fraction > 0.0) {
    std::vector<std::size_t> idx(ps.triples.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    Rng rng(mix64(cfg.seed, fnv1a64("holdout")));
    rng.shuffle(idx);
    auto keep = static_cast<std::size_t>(
        std::ceil(static_cast<double>(idx.size()) * (1.0 - cfg.holdout_fraction)));
    std::vector<std::size_t> kept(idx.begin(), idx.begin() + keep);
    std::sort(kept.begin(), kept.end());
    std::vector<Triple> out;
    out.reserve(kept.size());
    for (std::size_t i : kept) out.push_back(ps.triples[i]);
    ps.triples = std::move(out);
  }
  return ps;
}

struct BatchScore {
  Value loss;
  double pos_mean;
  double neg_mean;
};

// Scores the batch positives and their sampled negatives against the current
// embeddings and assembles the logistic loss.
BatchScore score_batch(Tape& tape, const TypedGraph& g, Value emb, Value dm,
                       const std::vector<Triple>& positives,
                       const std::vector<std::size_t>& batch_idx, const TrainConfig& cfg,
                       std::uint64_t epoch) {
  std::vector<std::int32_t> pos_h, pos_r, pos_t, neg_h, neg_r, neg_t;
  pos_h.reserve(batch_idx.size());
  for (std::size_t idx : batch_idx) {
    const Triple& p = positives[idx];
    pos_h.push_back(g.global_id(p.head));
    pos_r.push_back(p.relation);
    pos_t.push_back(g.global_id(p.tail));
    auto negs = sample_negatives(g, p, cfg.negatives_per_positive, mix64(cfg.seed, epoch),
                                 static_cast<std::uint64_t>(idx));
    for (const auto& n : negs) {
      neg_h.push_back(g.global_id(n.triple.head));
      neg_r.push_back(n.triple.relation);
      neg_t.push_back(g.global_id(n.triple.tail));
    }
  }
  Value s_pos = tape.score_triples(emb, dm, pos_h, pos_r, pos_t);
  Value s_neg = tape.score_triples(emb, dm, neg_h, neg_r, neg_t);
  BatchScore out;
  out.pos_mean = s_pos.mat().mean();
  out.neg_mean = s_neg.mat().mean();
  Value lp = tape.mean_all(tape.softplus(tape.scale_const(s_pos, -1.0)));
  Value ln = tape.mean_all(tape.softplus(s_neg));
  out.loss = tape.add(lp, ln);
  return out;
}

}  // namespace

TrainResult train(const TypedGraph& g, const TrainConfig& cfg, const FeatureConfig& fcfg) {
  cfg.validate();
  if (!g.schema().augmented) throw SchemaViolation("train expects an inverse-augmented graph");

  TrainResult result{build_parameter_store(g, cfg, fcfg), {}};
  ParameterStore& store = result.store;
  FeatureProvider provider(g, fcfg, store);

  PositiveSet positives = collect_positives(g, cfg);
  if (positives.triples.empty()) throw EmptyGraph("no training triples");

  std::int32_t n_epochs = cfg.resolved_epochs();
  double lr = cfg.resolved_learning_rate();

  EncodeOptions opts;
  opts.training = true;
  opts.dropout_rate = cfg.resolved_dropout_rate();
  opts.head_count = cfg.head_count;
  opts.hetgnn = cfg.hetgnn;

  // neighbor sampling does not depend on parameters; draw once per run
  HetGnnSamples samples;
  if (cfg.model_kind == ModelKind::hetgnn) {
    samples = hetgnn_sample_neighbors(g, cfg.hetgnn, mix64(cfg.seed, fnv1a64("rwr")));
    opts.samples = &samples;
  }

  std::vector<std::size_t> order(positives.triples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (std::int32_t epoch = 0; epoch < n_epochs; ++epoch) {
    double epoch_loss = 0.0, pos_mean = 0.0, neg_mean = 0.0;
    if (cfg.mode == TrainMode::full_batch) {
      Tape tape;
      opts.dropout_seed = mix64(cfg.seed, fnv1a64("dropout"), static_cast<std::uint64_t>(epoch));
      Value emb = encode(tape, cfg.model_kind, g, provider, store, opts);
      Value dm = tape.leaf(*DistMultParams::view(store).relations);
      BatchScore bs =
          score_batch(tape, g, emb, dm, positives.triples, order, cfg, static_cast<std::uint64_t>(epoch));
      epoch_loss = bs.loss.scalar();
      pos_mean = bs.pos_mean;
      neg_mean = bs.neg_mean;
      if (!std::isfinite(epoch_loss)) {
        throw DivergedLoss("epoch " + std::to_string(epoch) + " loss is not finite");
      }
      store.zero_grads();
      tape.backward(bs.loss);
      adam_step(store, lr, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps);
    } else {
      Rng shuffle_rng(mix64(cfg.seed, fnv1a64("shuffle"), static_cast<std::uint64_t>(epoch)));
      shuffle_rng.shuffle(order);
      std::size_t done = 0;
      std::uint64_t batch_index = 0;
      double weight_total = 0.0;
      while (done < order.size()) {
        std::size_t take = std::min<std::size_t>(cfg.batch_size, order.size() - done);
        std::vector<std::size_t> batch(order.begin() + done, order.begin() + done + take);
        done += take;
        opts.dropout_seed = mix64(mix64(cfg.seed, fnv1a64("dropout"), static_cast<std::uint64_t>(epoch)),
                                  batch_index++);

        Tape tape;
        Value emb = encode(tape, cfg.model_kind, g, provider, store, opts);
        Value dm = tape.leaf(*DistMultParams::view(store).relations);
        BatchScore bs =
            score_batch(tape, g, emb, dm, positives.triples, batch, cfg, static_cast<std::uint64_t>(epoch));
        double batch_loss = bs.loss.scalar();
        if (!std::isfinite(batch_loss)) {
          throw DivergedLoss("epoch " + std::to_string(epoch) + " loss is not finite");
        }
        auto w = static_cast<double>(take);
        epoch_loss += batch_loss * w;
        pos_mean += bs.pos_mean * w;
        neg_mean += bs.neg_mean * w;
        weight_total += w;

        store.zero_grads();
        tape.backward(bs.loss);
        adam_step(store, lr, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps);
      }
      epoch_loss /= weight_total;
      pos_mean /= weight_total;
      neg_mean /= weight_total;
    }
    result.trace.push_back({epoch, epoch_loss, pos_mean, neg_mean});
  }
  return result;
}

Dense2D encode_inference(const TypedGraph& g, const TrainConfig& cfg, const FeatureConfig& fcfg,
                         ParameterStore& store) {
  FeatureProvider provider(g, fcfg, store);
  EncodeOptions opts;
  opts.training = false;
  opts.dropout_rate = 0.0;
  opts.head_count = cfg.head_count;
  opts.hetgnn = cfg.hetgnn;
  opts.sample_seed = mix64(cfg.seed, fnv1a64("rwr"));
  Tape tape;
  Value emb = encode(tape, cfg.model_kind, g, provider, store, opts);
  return emb.mat();
}

}  // namespace hetkg
