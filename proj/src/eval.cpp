#include "hetkg/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "hetkg/threading.hpp"

namespace hetkg {

SplitResult split_edges(const TypedGraph& g, const SplitSpec& spec) {
  const auto& triples = g.triples();
  std::vector<char> is_test(triples.size(), 0);

  if (spec.stratified) {
    std::int32_t nrel = g.schema().num_relations();
    std::vector<std::vector<std::size_t>> per_rel(nrel);
    for (std::size_t i = 0; i < triples.size(); ++i) {
      per_rel[triples[i].relation].push_back(i);
    }
    for (std::int32_t r = 0; r < nrel; ++r) {
      auto& idx = per_rel[r];
      if (idx.size() < 6) {
        throw RelationTooSmall("relation " + g.schema().relation_types[r] + " has " +
                               std::to_string(idx.size()) + " triples; the 5:1 split needs >= 6");
      }
      Rng rng(mix64(spec.seed, static_cast<std::uint64_t>(r)));
      rng.shuffle(idx);
      std::size_t n_test = idx.size() / 6;
      for (std::size_t k = 0; k < n_test; ++k) is_test[idx[k]] = 1;
    }
  } else {
    if (triples.size() < 6) throw RelationTooSmall("graph has fewer than 6 triples");
    std::vector<std::size_t> idx(triples.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    Rng rng(mix64(spec.seed, fnv1a64("global-split")));
    rng.shuffle(idx);
    std::size_t n_test = idx.size() / 6;
    for (std::size_t k = 0; k < n_test; ++k) is_test[idx[k]] = 1;
  }

  std::vector<Triple> train_triples, test_triples;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    (is_test[i] ? test_triples : train_triples).push_back(triples[i]);
  }
  return SplitResult{TypedGraph(g.schema(), g.labels(), std::move(train_triples),
                                g.all_attributes()),
                     std::move(test_triples)};
}

std::int32_t rank_from_scores(const std::vector<double>& scores, std::size_t true_index,
                              const std::vector<char>& excluded) {
  double s_true = scores[true_index];
  std::int64_t greater = 0, equal = 0;
  for (std::size_t c = 0; c < scores.size(); ++c) {
    if (c == true_index || excluded[c]) continue;
    if (scores[c] > s_true) {
      ++greater;
    } else if (scores[c] == s_true) {
      ++equal;
    }
  }
  // average tie rank, .5 rounded up
  return static_cast<std::int32_t>(1 + greater + (equal + 1) / 2);
}

RankedResult filtered_rank(const TypedGraph& g_full, const Dense2D& embeddings,
                           const Dense2D& relation_diagonals, const Triple& test_triple,
                           Direction direction) {
  const auto& schema = g_full.schema();
  std::int32_t orig = schema.original_relation_count > 0 ? schema.original_relation_count
                                                         : schema.num_relations();
  if (test_triple.relation >= orig) {
    throw SchemaViolation("filtered_rank expects an original (non-inverse) relation");
  }
  const auto& meta = schema.meta(test_triple.relation);
  bool rank_tail = direction == Direction::forward;
  std::int32_t cand_type = rank_tail ? meta.tail_type : meta.head_type;
  std::int32_t n_cand = g_full.node_count(cand_type);
  std::int32_t true_local = rank_tail ? test_triple.tail.local_id : test_triple.head.local_id;

  Vector fixed = embeddings.row(g_full.global_id(rank_tail ? test_triple.head : test_triple.tail));
  Vector rel = relation_diagonals.row(test_triple.relation);
  Vector mixed = fixed.cwiseProduct(rel);

  std::vector<double> scores(n_cand);
  std::vector<char> excluded(n_cand, 0);
  auto off = g_full.type_offset(cand_type);
  for (std::int32_t c = 0; c < n_cand; ++c) {
    scores[c] = mixed.dot(embeddings.row(off + c));
    if (c == true_local) continue;
    Triple probe = test_triple;
    (rank_tail ? probe.tail.local_id : probe.head.local_id) = c;
    if (g_full.contains(probe)) excluded[c] = 1;
  }
  std::int32_t rank = rank_from_scores(scores, static_cast<std::size_t>(true_local), excluded);
  return RankedResult{test_triple, rank_tail ? Direction::forward : Direction::inverse, rank,
                      n_cand};
}

void MetricsReport::validate() const {
  auto h1 = hits.at(1), h3 = hits.at(3), h10 = hits.at(10);
  if (!(h1 <= h3 && h3 <= h10)) throw DivergedLoss("hits@k must be non-decreasing in k");
  if (!(mrr > 0.0 && mrr <= 1.0)) throw DivergedLoss("mrr must lie in (0,1]");
  if (mrr + 1e-12 < h1) throw DivergedLoss("mrr must be >= hits@1");
}

std::int32_t use_case_relation(const GraphSchema& schema, UseCase uc) {
  std::int32_t r = schema.relation_index(uc == UseCase::A ? "cites" : "has_topic");
  if (r < 0) throw SchemaViolation("schema lacks the use-case relation");
  return r;
}

MetricsReport evaluate(const TypedGraph& g_full, const TypedGraph& g_train,
                       const std::vector<Triple>& test, const Dense2D& embeddings,
                       const Dense2D& relation_diagonals, UseCase use_case,
                       RankDirections directions, const std::string& model_name) {
  for (const Triple& t : g_train.triples()) {
    if (!g_full.contains(t)) {
      throw SchemaViolation("train graph holds a triple missing from the full graph");
    }
  }
  std::int32_t rel = use_case_relation(g_full.schema(), use_case);
  std::vector<Triple> scoped;
  for (const Triple& t : test) {
    if (t.relation == rel) scoped.push_back(t);
  }
  if (scoped.empty()) {
    throw EmptyTestSet("no test triples for use case " + std::string(use_case == UseCase::A ? "A" : "B"));
  }

  bool both = directions == RankDirections::both;
  std::size_t per = both ? 2 : 1;
  MetricsReport report;
  report.use_case = use_case;
  report.model = model_name;
  report.per_triple.resize(scoped.size() * per);

  parallel_for(static_cast<std::int64_t>(scoped.size()), [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      report.per_triple[i * per] =
          filtered_rank(g_full, embeddings, relation_diagonals, scoped[i], Direction::forward);
      if (both) {
        report.per_triple[i * per + 1] =
            filtered_rank(g_full, embeddings, relation_diagonals, scoped[i], Direction::inverse);
      }
    }
  });

  double mrr = 0.0;
  std::map<std::int32_t, double> hits{{1, 0.0}, {3, 0.0}, {10, 0.0}};
  for (const auto& r : report.per_triple) {
    mrr += 1.0 / static_cast<double>(r.filtered_rank);
    for (auto& [k, v] : hits) {
      if (r.filtered_rank <= k) v += 1.0;
    }
  }
  auto n = static_cast<double>(report.per_triple.size());
  report.mrr = mrr / n;
  for (auto& [k, v] : hits) v /= n;
  report.hits = hits;
  report.validate();
  return report;
}

void write_metrics_csv(const std::vector<MetricsReport>& reports,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "use_case,model,mrr,hits1,hits3,hits10\n";
  char buf[160];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof(buf), "%s,%s,%.6f,%.6f,%.6f,%.6f\n",
                  r.use_case == UseCase::A ? "A" : "B", r.model.c_str(), r.mrr, r.hits.at(1),
                  r.hits.at(3), r.hits.at(10));
    out << buf;
  }
}

void write_rank_dump(const MetricsReport& report, const TypedGraph& g,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << "head,relation,tail,direction,rank,candidates\n";
  for (const auto& r : report.per_triple) {
    out << g.label(r.triple.head) << ',' << g.schema().relation_types[r.triple.relation] << ','
        << g.label(r.triple.tail) << ',' << (r.direction == Direction::forward ? "tail" : "head")
        << ',' << r.filtered_rank << ',' << r.candidate_count << '\n';
  }
}

}  // namespace hetkg
