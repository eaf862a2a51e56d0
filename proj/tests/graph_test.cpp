#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hetkg/graph.hpp"
#include "testutil.hpp"

using namespace hetkg;
using testutil::TempDir;

TEST_CASE("news schema shape") {
  GraphSchema s = GraphSchema::news();
  CHECK(s.node_types.size() == 5);
  CHECK(s.relation_types.size() == 4);
  CHECK(s.meta_relations.size() == 4);
  std::int32_t ht = s.relation_index("has_topic");
  CHECK(s.cardinality[ht] == Cardinality::many_to_many);
  CHECK(s.meta(s.relation_index("cites")).head_type == s.node_type_index("article"));
  CHECK(s.meta(s.relation_index("cites")).tail_type == s.node_type_index("paper"));
  CHECK(s.meta(ht).tail_type == s.node_type_index("topic"));
  CHECK(s.meta(s.relation_index("is_author_of")).head_type == s.node_type_index("author"));
  CHECK(s.meta(s.relation_index("is_affiliated_with")).tail_type ==
        s.node_type_index("institute"));
}

TEST_CASE("load_graph on the nine-row fixture") {
  TempDir dir("load9");
  testutil::write_file(dir.file("edges.tsv"), testutil::nine_row_edges());
  TypedGraph g = load_graph(dir.file("edges.tsv"), std::nullopt, GraphSchema::news());
  CHECK(g.total_nodes() == 9);
  CHECK(g.total_triples() == 9);
  CHECK(g.node_count(g.schema().node_type_index("topic")) == 2);
  CHECK(g.node_count(g.schema().node_type_index("institute")) == 1);
  // dense renumbering in first-appearance order
  CHECK(g.label({g.schema().node_type_index("article"), 0}) == "A");
  CHECK(g.label({g.schema().node_type_index("article"), 1}) == "B");
  CHECK(g.label({g.schema().node_type_index("topic"), 0}) == "covid");
}

TEST_CASE("load_graph error paths") {
  TempDir dir("loaderr");
  GraphSchema schema = GraphSchema::news();

  testutil::write_file(dir.file("empty.tsv"), "# only a comment\n");
  CHECK_THROWS_AS(load_graph(dir.file("empty.tsv"), std::nullopt, schema), EmptyGraph);

  testutil::write_file(dir.file("unknown.tsv"), "blog\tX\tcites\tpaper\tP\n");
  CHECK_THROWS_AS(load_graph(dir.file("unknown.tsv"), std::nullopt, schema), UnknownType);

  testutil::write_file(dir.file("unknown_rel.tsv"), "article\tX\tmentions\tpaper\tP\n");
  CHECK_THROWS_AS(load_graph(dir.file("unknown_rel.tsv"), std::nullopt, schema), UnknownType);

  testutil::write_file(dir.file("viol.tsv"), "topic\tT\tcites\tpaper\tP\n");
  CHECK_THROWS_AS(load_graph(dir.file("viol.tsv"), std::nullopt, schema), SchemaViolation);

  testutil::write_file(dir.file("short.tsv"), "article\tX\tcites\tpaper\n");
  CHECK_THROWS_AS(load_graph(dir.file("short.tsv"), std::nullopt, schema), MalformedRow);

  testutil::write_file(dir.file("edges.tsv"), "article\tA\tcites\tpaper\tP\n");
  testutil::write_file(dir.file("bad_date.tsv"),
                       "article\tA\tpublished_date\t2020-11-31\n");
  CHECK_THROWS_AS(load_graph(dir.file("edges.tsv"), dir.file("bad_date.tsv"), schema), BadDate);

  testutil::write_file(dir.file("bad_node.tsv"), "article\tZ\ttitle\thello\n");
  CHECK_THROWS_AS(load_graph(dir.file("edges.tsv"), dir.file("bad_node.tsv"), schema),
                  UnknownNode);

  testutil::write_file(dir.file("bad_key.tsv"), "article\tA\tcolor\tred\n");
  CHECK_THROWS_AS(load_graph(dir.file("edges.tsv"), dir.file("bad_key.tsv"), schema),
                  MalformedRow);
}

TEST_CASE("duplicate triples collapse with a counter") {
  TempDir dir("dups");
  testutil::write_file(dir.file("edges.tsv"),
                       "article\tA\tcites\tpaper\tP\n"
                       "article\tA\tcites\tpaper\tP\n"
                       "article\tA\tcites\tpaper\tQ\n");
  TypedGraph g = load_graph(dir.file("edges.tsv"), std::nullopt, GraphSchema::news());
  CHECK(g.total_triples() == 2);
  CHECK(g.duplicates_dropped() == 1);
}

TEST_CASE("attributes load") {
  TempDir dir("attrs");
  testutil::write_file(dir.file("edges.tsv"), testutil::nine_row_edges());
  testutil::write_file(dir.file("attrs.tsv"),
                       "article\tA\ttitle\tvaccine trial results\n"
                       "article\tA\tpublished_date\t2020-08-15\n"
                       "paper\tP1\ttitle\timmunology study\n");
  TypedGraph g = load_graph(dir.file("edges.tsv"), dir.file("attrs.tsv"), GraphSchema::news());
  std::int32_t ta = g.schema().node_type_index("article");
  CHECK(g.attributes({ta, 0}).title.value() == "vaccine trial results");
  CHECK(g.attributes({ta, 0}).published_date.value() == parse_iso_date("2020-08-15"));
  CHECK(!g.attributes({ta, 1}).title.has_value());
}

TEST_CASE("neighbors are sorted, typed and direction-aware") {
  TempDir dir("nbrs");
  testutil::write_file(dir.file("edges.tsv"),
                       "article\ta0\tcites\tpaper\tp1\n"
                       "article\ta0\tcites\tpaper\tp0\n"
                       "article\ta1\tcites\tpaper\tp0\n"
                       "article\ta2\thas_topic\ttopic\tt0\n");
  TypedGraph g = load_graph(dir.file("edges.tsv"), std::nullopt, GraphSchema::news());
  std::int32_t ta = g.schema().node_type_index("article");
  std::int32_t tp = g.schema().node_type_index("paper");
  std::int32_t cites = g.schema().relation_index("cites");

  auto fwd = neighbors(g, {ta, 0}, cites, Direction::forward);
  REQUIRE(fwd.size() == 2);  // ascending local id: p1 interned first -> p1=0, p0=1
  CHECK(fwd[0].local_id == 0);
  CHECK(fwd[1].local_id == 1);
  CHECK(fwd[0].node_type == tp);

  auto inv = neighbors(g, {tp, 1}, cites, Direction::inverse);  // p0
  REQUIRE(inv.size() == 2);
  CHECK(inv[0].local_id == 0);
  CHECK(inv[1].local_id == 1);

  // isolated under this relation
  CHECK(neighbors(g, {ta, 2}, cites, Direction::forward).empty());
  // type not an endpoint of the relation
  CHECK(neighbors(g, {g.schema().node_type_index("topic"), 0}, cites, Direction::forward).empty());
}

TEST_CASE("degree_stats means") {
  TempDir dir("deg");
  testutil::write_file(dir.file("edges.tsv"),
                       "article\ta0\tcites\tpaper\tp0\n"
                       "article\ta0\tcites\tpaper\tp1\n"
                       "article\ta1\tcites\tpaper\tp0\n");
  TypedGraph g = load_graph(dir.file("edges.tsv"), std::nullopt, GraphSchema::news());
  std::int32_t cites = g.schema().relation_index("cites");
  DegreeStats stats = degree_stats(g);
  bool saw_forward = false, saw_inverse = false;
  for (const auto& e : stats.entries) {
    if (e.relation != cites) continue;
    if (e.direction == Direction::forward) {
      saw_forward = true;
      CHECK(e.triple_count == 3);
      CHECK(e.mean_degree == doctest::Approx(1.5));
      CHECK(e.min_degree == 1);
      CHECK(e.max_degree == 2);
    } else {
      saw_inverse = true;
      CHECK(e.mean_degree == doctest::Approx(1.5));
    }
  }
  CHECK(saw_forward);
  CHECK(saw_inverse);
}

TEST_CASE("degree sums equal each other and the triple count") {
  TempDir dir("degsum");
  testutil::write_file(dir.file("edges.tsv"), testutil::nine_row_edges());
  TypedGraph g = load_graph(dir.file("edges.tsv"), std::nullopt, GraphSchema::news());
  for (std::int32_t r = 0; r < g.schema().num_relations(); ++r) {
    const auto& m = g.schema().meta(r);
    std::int64_t fwd = 0, inv = 0;
    for (std::int32_t i = 0; i < g.node_count(m.head_type); ++i) {
      fwd += static_cast<std::int64_t>(g.neighbors({m.head_type, i}, r, Direction::forward).size());
    }
    for (std::int32_t i = 0; i < g.node_count(m.tail_type); ++i) {
      inv += static_cast<std::int64_t>(g.neighbors({m.tail_type, i}, r, Direction::inverse).size());
    }
    CHECK(fwd == g.relation_count(r));
    CHECK(inv == g.relation_count(r));
  }
}

TEST_CASE("augment_with_inverses") {
  TempDir dir("aug");
  testutil::write_file(dir.file("edges.tsv"), "article\ta0\tcites\tpaper\tp0\n");
  TypedGraph g = load_graph(dir.file("edges.tsv"), std::nullopt, GraphSchema::news());
  TypedGraph aug = augment_with_inverses(g);
  CHECK(aug.schema().num_relations() == 8);
  CHECK(aug.schema().original_relation_count == 4);
  CHECK(aug.total_triples() == 2);

  std::int32_t inv_rel = aug.schema().relation_index("cites_inv");
  REQUIRE(inv_rel >= 0);
  std::int32_t tp = aug.schema().node_type_index("paper");
  auto back = neighbors(aug, {tp, 0}, inv_rel, Direction::forward);
  REQUIRE(back.size() == 1);
  CHECK(back[0].node_type == aug.schema().node_type_index("article"));

  CHECK_THROWS_AS(augment_with_inverses(aug), AlreadyAugmented);
}

TEST_CASE("edge list round trip preserves triples and labels") {
  TempDir dir("round");
  testutil::write_file(dir.file("edges.tsv"), testutil::nine_row_edges());
  testutil::write_file(dir.file("attrs.tsv"),
                       "article\tA\ttitle\tsome vaccine news\n"
                       "article\tA\tpublished_date\t2020-09-01\n");
  TypedGraph g = load_graph(dir.file("edges.tsv"), dir.file("attrs.tsv"), GraphSchema::news());
  write_edge_list(g, dir.file("out.tsv"));
  write_attributes(g, dir.file("out_attrs.tsv"));
  TypedGraph g2 = load_graph(dir.file("out.tsv"), dir.file("out_attrs.tsv"), GraphSchema::news());
  CHECK(g2.triples() == g.triples());
  CHECK(g2.labels() == g.labels());
  std::int32_t ta = g.schema().node_type_index("article");
  CHECK(g2.attributes({ta, 0}).title == g.attributes({ta, 0}).title);
  CHECK(g2.attributes({ta, 0}).published_date == g.attributes({ta, 0}).published_date);
}

TEST_CASE("loading twice is deterministic") {
  TempDir dir("det");
  testutil::write_file(dir.file("edges.tsv"), testutil::nine_row_edges());
  TypedGraph a = load_graph(dir.file("edges.tsv"), std::nullopt, GraphSchema::news());
  TypedGraph b = load_graph(dir.file("edges.tsv"), std::nullopt, GraphSchema::news());
  CHECK(a.triples() == b.triples());
  CHECK(a.labels() == b.labels());
}

TEST_CASE("date parsing") {
  CHECK(parse_iso_date("1970-01-01") == 0);
  CHECK(parse_iso_date("2020-08-01") == 18475);
  CHECK(parse_iso_date("2020-11-30") == 18596);
  CHECK(format_iso_date(18475) == "2020-08-01");
  CHECK_THROWS_AS(parse_iso_date("2020-11-31"), BadDate);
  CHECK_THROWS_AS(parse_iso_date("not a date"), BadDate);
}
