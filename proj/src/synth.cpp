#include "hetkg/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "hetkg/rng.hpp"

namespace hetkg {

namespace {

constexpr std::int64_t kWindowStart = 18475;  // 2020-08-01
constexpr std::int64_t kWindowEnd = 18596;    // 2020-11-30 (source window end corrected
                                              // to a valid calendar date)

std::vector<std::string> make_labels(const char* stem, std::int32_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  char buf[32];
  for (std::int32_t i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof(buf), "%s_%05d", stem, i);
    out.emplace_back(buf);
  }
  return out;
}

struct PairSet {
  std::set<std::pair<std::int32_t, std::int32_t>> seen;
  bool add(std::int32_t a, std::int32_t b) { return seen.emplace(a, b).second; }
};

}  // namespace

std::int32_t planted_block(std::int32_t node_index, std::int32_t blocks) {
  return node_index % blocks;
}

void SynthConfig::validate() const {
  for (std::int32_t c :
       {topics, articles, papers, authors, institutes}) {
    if (c < 1) throw ConfigError("every node count must be >= 1");
  }
  for (std::int32_t c : {cites, has_topic, is_author_of, is_affiliated_with}) {
    if (c < 1) throw ConfigError("every edge count must be >= 1");
  }
  if (planted_blocks < 0 || (planted_blocks > 0 && planted_blocks > std::min(topics, 10))) {
    throw ConfigError("planted_blocks must be <= min(topic count, 10)");
  }
  if (!(planted_noise >= 0.0 && planted_noise <= 1.0)) {
    throw ConfigError("planted_noise must be in [0,1]");
  }
  if (title_vocab_size < 1) throw ConfigError("title_vocab_size must be >= 1");

  auto pairs = [](std::int32_t a, std::int32_t b) {
    return static_cast<std::int64_t>(a) * static_cast<std::int64_t>(b);
  };
  if (cites > pairs(articles, papers)) {
    throw InfeasibleCounts("cites wants more distinct pairs than articles x papers");
  }
  if (has_topic > pairs(articles, topics)) {
    throw InfeasibleCounts("has_topic wants more distinct pairs than articles x topics");
  }
  if (is_author_of > pairs(authors, papers)) {
    throw InfeasibleCounts("is_author_of wants more distinct pairs than authors x papers");
  }
  if (is_affiliated_with > pairs(authors, institutes)) {
    throw InfeasibleCounts("is_affiliated_with wants more distinct pairs than authors x institutes");
  }
  // coverage minima: every article needs a cites and a has_topic edge, every
  // topic at least one article, every author and paper an authorship edge,
  // every institute an affiliation
  if (cites < articles) throw InfeasibleCounts("cites must cover every article");
  if (has_topic < std::max(articles, topics)) {
    throw InfeasibleCounts("has_topic must cover every article and every topic");
  }
  if (is_author_of < std::max(authors, papers)) {
    throw InfeasibleCounts("is_author_of must cover every author and every paper");
  }
  if (is_affiliated_with < std::max(authors, institutes)) {
    throw InfeasibleCounts("is_affiliated_with must cover every author and every institute");
  }
}

TypedGraph generate(const SynthConfig& cfg) {
  cfg.validate();
  GraphSchema schema = GraphSchema::news();
  std::int32_t t_topic = schema.node_type_index("topic");
  std::int32_t t_article = schema.node_type_index("article");
  std::int32_t t_paper = schema.node_type_index("paper");
  std::int32_t t_author = schema.node_type_index("author");
  std::int32_t t_institute = schema.node_type_index("institute");
  std::int32_t r_cites = schema.relation_index("cites");
  std::int32_t r_topic = schema.relation_index("has_topic");
  std::int32_t r_author = schema.relation_index("is_author_of");
  std::int32_t r_affil = schema.relation_index("is_affiliated_with");

  std::vector<std::vector<std::string>> labels(schema.num_node_types());
  labels[t_topic] = make_labels("topic", cfg.topics);
  labels[t_article] = make_labels("article", cfg.articles);
  labels[t_paper] = make_labels("paper", cfg.papers);
  labels[t_author] = make_labels("author", cfg.authors);
  labels[t_institute] = make_labels("institute", cfg.institutes);

  Rng rng(mix64(cfg.seed, fnv1a64("synth")));
  std::vector<Triple> triples;

  bool planted = cfg.planted_blocks > 0;
  std::int32_t blocks = planted ? cfg.planted_blocks : 1;

  // Theme machinery (planted mode). Topics pair up inside their block; every
  // article/paper/token lands in one (block, theme) cell.
  auto topics_in_block = [&](std::int32_t b) {
    return (cfg.topics - b + blocks - 1) / blocks;
  };
  auto themes_in_block = [&](std::int32_t b) { return (topics_in_block(b) + 1) / 2; };
  auto topic_block = [&](std::int32_t j) { return planted_block(j, blocks); };
  auto topic_theme = [&](std::int32_t j) { return (j / blocks) / 2; };
  auto article_block = [&](std::int32_t k) { return planted_block(k, blocks); };
  auto article_theme = [&](std::int32_t k) {
    return (k / blocks) % std::max(1, themes_in_block(article_block(k)));
  };
  auto paper_block = [&](std::int32_t q) { return planted_block(q, blocks); };
  auto paper_theme = [&](std::int32_t q) {
    return (q / blocks) % std::max(1, themes_in_block(paper_block(q)));
  };

  // Tokens nest inside topics (token index modulo topic count), so each
  // block's vocabulary is the union of its topics' slices and a title built
  // from an article's topics carries the block- and topic-level signal the
  // content-aware models are meant to pick up.
  std::vector<std::vector<std::vector<std::int32_t>>> theme_topics(blocks), theme_papers(blocks);
  std::vector<std::vector<std::int32_t>> topic_tokens(cfg.topics);
  if (planted) {
    for (std::int32_t b = 0; b < blocks; ++b) {
      theme_topics[b].resize(themes_in_block(b));
      theme_papers[b].resize(themes_in_block(b));
    }
    for (std::int32_t j = 0; j < cfg.topics; ++j) {
      theme_topics[topic_block(j)][topic_theme(j)].push_back(j);
    }
    for (std::int32_t q = 0; q < cfg.papers; ++q) {
      theme_papers[paper_block(q)][paper_theme(q)].push_back(q);
    }
    for (std::int32_t w = 0; w < cfg.title_vocab_size; ++w) {
      topic_tokens[w % cfg.topics].push_back(w);
    }
  }

  auto other_block_pick = [&](std::int32_t own_block, std::int32_t universe) {
    for (std::int32_t attempt = 0; attempt < 10000; ++attempt) {
      auto pick = static_cast<std::int32_t>(rng.below(universe));
      if (planted_block(pick, blocks) != own_block) return pick;
    }
    return static_cast<std::int32_t>(rng.below(universe));
  };

  // --- has_topic: cover articles, then topics, then fill -------------------
  {
    PairSet used;
    std::int32_t budget = cfg.has_topic;
    auto draw_topic_for = [&](std::int32_t a) {
      if (!planted) return static_cast<std::int32_t>(rng.below(cfg.topics));
      if (blocks > 1 && rng.uniform() < cfg.planted_noise) {
        return other_block_pick(article_block(a), cfg.topics);
      }
      const auto& pool = theme_topics[article_block(a)][article_theme(a)];
      return pool[rng.below(pool.size())];
    };
    auto emit = [&](std::int32_t a, std::int32_t j) {
      triples.push_back({{t_article, a}, r_topic, {t_topic, j}});
      --budget;
    };
    for (std::int32_t a = 0; a < cfg.articles; ++a) {
      std::int32_t j = draw_topic_for(a);
      used.add(a, j);
      emit(a, j);
    }
    std::vector<char> topic_covered(cfg.topics, 0);
    for (const Triple& t : triples) {
      if (t.relation == r_topic) topic_covered[t.tail.local_id] = 1;
    }
    for (std::int32_t j = 0; j < cfg.topics; ++j) {
      if (topic_covered[j]) continue;
      if (budget <= 0) throw InfeasibleCounts("has_topic budget exhausted before topic coverage");
      // pick an article allowed to carry this topic (same theme when planted)
      for (std::int64_t attempt = 0;; ++attempt) {
        auto a = static_cast<std::int32_t>(rng.below(cfg.articles));
        bool ok = !planted || (article_block(a) == topic_block(j) &&
                               article_theme(a) == topic_theme(j));
        if (ok && used.add(a, j)) {
          emit(a, j);
          break;
        }
        if (attempt > 1000L * cfg.articles) {
          throw InfeasibleCounts("cannot cover topic " + std::to_string(j));
        }
      }
    }
    std::int64_t attempts = 0;
    while (budget > 0) {
      auto a = static_cast<std::int32_t>(rng.below(cfg.articles));
      std::int32_t j = draw_topic_for(a);
      if (used.add(a, j)) {
        emit(a, j);
        attempts = 0;
      } else if (++attempts > 200L * cfg.has_topic + 10000) {
        throw InfeasibleCounts("cannot place the requested has_topic edges");
      }
    }
  }

  // --- cites: cover articles, then fill ------------------------------------
  {
    PairSet used;
    std::int32_t budget = cfg.cites;
    auto draw_paper_for = [&](std::int32_t a) {
      if (!planted) return static_cast<std::int32_t>(rng.below(cfg.papers));
      if (blocks > 1 && rng.uniform() < cfg.planted_noise) {
        return other_block_pick(article_block(a), cfg.papers);
      }
      const auto& pool = theme_papers[article_block(a)][article_theme(a)];
      if (pool.empty()) return static_cast<std::int32_t>(rng.below(cfg.papers));
      return pool[rng.below(pool.size())];
    };
    for (std::int32_t a = 0; a < cfg.articles; ++a) {
      std::int32_t q = draw_paper_for(a);
      used.add(a, q);
      triples.push_back({{t_article, a}, r_cites, {t_paper, q}});
      --budget;
    }
    std::int64_t attempts = 0;
    while (budget > 0) {
      auto a = static_cast<std::int32_t>(rng.below(cfg.articles));
      std::int32_t q = draw_paper_for(a);
      if (used.add(a, q)) {
        triples.push_back({{t_article, a}, r_cites, {t_paper, q}});
        --budget;
        attempts = 0;
      } else if (++attempts > 200L * cfg.cites + 10000) {
        throw InfeasibleCounts("cannot place the requested cites edges");
      }
    }
  }

  // --- is_author_of: cover papers and authors, then fill -------------------
  {
    PairSet used;
    std::int32_t budget = cfg.is_author_of;
    std::vector<std::int32_t> author_perm(cfg.authors);
    for (std::int32_t i = 0; i < cfg.authors; ++i) author_perm[i] = i;
    rng.shuffle(author_perm);
    std::vector<std::int32_t> paper_perm(cfg.papers);
    for (std::int32_t i = 0; i < cfg.papers; ++i) paper_perm[i] = i;
    rng.shuffle(paper_perm);
    std::int32_t coverage = std::max(cfg.authors, cfg.papers);
    for (std::int32_t i = 0; i < coverage; ++i) {
      std::int32_t u = author_perm[i % cfg.authors];
      std::int32_t q = paper_perm[i % cfg.papers];
      if (!used.add(u, q)) {
        // cycle collision; place anywhere fresh
        for (;;) {
          u = static_cast<std::int32_t>(rng.below(cfg.authors));
          q = static_cast<std::int32_t>(rng.below(cfg.papers));
          if (used.add(u, q)) break;
        }
      }
      triples.push_back({{t_author, u}, r_author, {t_paper, q}});
      --budget;
    }
    while (budget > 0) {
      auto u = static_cast<std::int32_t>(rng.below(cfg.authors));
      auto q = static_cast<std::int32_t>(rng.below(cfg.papers));
      if (used.add(u, q)) {
        triples.push_back({{t_author, u}, r_author, {t_paper, q}});
        --budget;
      }
    }
  }

  // --- is_affiliated_with: one pass over authors covers both sides ---------
  {
    PairSet used;
    std::int32_t budget = cfg.is_affiliated_with;
    std::vector<std::int32_t> inst_perm(cfg.institutes);
    for (std::int32_t i = 0; i < cfg.institutes; ++i) inst_perm[i] = i;
    rng.shuffle(inst_perm);
    for (std::int32_t u = 0; u < cfg.authors && budget > 0; ++u) {
      std::int32_t v = inst_perm[u % cfg.institutes];
      used.add(u, v);
      triples.push_back({{t_author, u}, r_affil, {t_institute, v}});
      --budget;
    }
    while (budget > 0) {
      auto u = static_cast<std::int32_t>(rng.below(cfg.authors));
      auto v = static_cast<std::int32_t>(rng.below(cfg.institutes));
      if (used.add(u, v)) {
        triples.push_back({{t_author, u}, r_affil, {t_institute, v}});
        --budget;
      }
    }
  }

  // --- attributes: titles for articles and papers, dates for articles ------
  std::vector<std::vector<NodeAttributes>> attrs(schema.num_node_types());
  for (std::size_t t = 0; t < attrs.size(); ++t) attrs[t].resize(labels[t].size());

  auto make_title = [&](const std::vector<std::int32_t>& topics) {
    std::int32_t len = 5 + static_cast<std::int32_t>(rng.below(6));
    std::string title;
    char buf[16];
    for (std::int32_t k = 0; k < len; ++k) {
      std::int32_t tok;
      if (planted && !topics.empty()) {
        const auto& pool = topic_tokens[topics[rng.below(topics.size())]];
        tok = pool.empty() ? static_cast<std::int32_t>(rng.below(cfg.title_vocab_size))
                           : pool[rng.below(pool.size())];
      } else {
        tok = static_cast<std::int32_t>(rng.below(cfg.title_vocab_size));
      }
      std::snprintf(buf, sizeof(buf), "%sw%03d", k == 0 ? "" : " ", tok);
      title += buf;
    }
    return title;
  };

  std::vector<std::vector<std::int32_t>> article_topics(cfg.articles);
  if (planted) {
    for (const Triple& t : triples) {
      if (t.relation == r_topic) article_topics[t.head.local_id].push_back(t.tail.local_id);
    }
  }
  for (std::int32_t a = 0; a < cfg.articles; ++a) {
    attrs[t_article][a].title = make_title(article_topics[a]);
    attrs[t_article][a].published_date =
        kWindowStart + static_cast<std::int64_t>(rng.below(kWindowEnd - kWindowStart + 1));
  }
  for (std::int32_t q = 0; q < cfg.papers; ++q) {
    std::vector<std::int32_t> paper_topic_pool;
    if (planted) paper_topic_pool = theme_topics[paper_block(q)][paper_theme(q)];
    attrs[t_paper][q].title = make_title(paper_topic_pool);
  }

  return TypedGraph(std::move(schema), std::move(labels), std::move(triples), std::move(attrs));
}

}  // namespace hetkg
