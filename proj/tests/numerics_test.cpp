#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hetkg/params.hpp"
#include "hetkg/tape.hpp"

using namespace hetkg;

namespace {

Dense2D random_mat(Eigen::Index r, Eigen::Index c, std::uint64_t seed, double scale = 1.0) {
  Rng rng(seed);
  Dense2D m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = (2.0 * rng.uniform() - 1.0) * scale;
  return m;
}

// Checks one tape op's backward pass against central differences by driving
// it with a random linear functional.
double op_gradcheck(const std::function<Value(Tape&, std::vector<Value>&)>& build,
                    std::vector<Dense2D> inputs, std::uint64_t seed) {
  ParameterStore store(seed);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    store.add("in" + std::to_string(i), inputs[i]);
  }
  Dense2D probe;  // fixed random cotangent, sized on first run
  auto loss_fn = [&](ParameterStore& s) {
    Tape tape;
    std::vector<Value> leaves;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      leaves.push_back(tape.leaf(s.get("in" + std::to_string(i))));
    }
    Value out = build(tape, leaves);
    if (probe.size() == 0) probe = random_mat(out.rows(), out.cols(), seed ^ 0xABCD, 1.0);
    Value loss = tape.sum_all(tape.cmul(out, tape.constant(probe)));
    tape.backward(loss);
    return loss.scalar();
  };
  return finite_diff_check(loss_fn, store, 1e-6, 64);
}

}  // namespace

TEST_CASE("matmul basics") {
  Dense2D id = Dense2D::Identity(3, 3);
  Dense2D m = random_mat(3, 3, 11);
  CHECK(matmul(id, m).isApprox(m));

  Dense2D a(2, 2), b(2, 1);
  a << 1, 2, 3, 4;
  b << 5, 6;
  Dense2D c = matmul(a, b);
  CHECK(c(0, 0) == doctest::Approx(17.0));
  CHECK(c(1, 0) == doctest::Approx(39.0));

  Dense2D bad(2, 3);
  CHECK_THROWS_AS(matmul(bad, bad), ShapeMismatch);
}

TEST_CASE("softmax_rows values and stability") {
  Dense2D equal = Dense2D::Constant(1, 4, 3.5);
  Dense2D s = softmax_rows(equal);
  for (int j = 0; j < 4; ++j) CHECK(s(0, j) == doctest::Approx(0.25).epsilon(1e-14));

  Dense2D two(1, 2);
  two << 0.0, std::log(3.0);
  Dense2D s2 = softmax_rows(two);
  CHECK(s2(0, 0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(s2(0, 1) == doctest::Approx(0.75).epsilon(1e-12));

  Dense2D one(1, 1);
  one << -123.0;
  CHECK(softmax_rows(one)(0, 0) == 1.0);

  // rows sum to 1 within 1e-12 even with large-magnitude entries
  Dense2D wild = random_mat(20, 16, 5, 1e3);
  Dense2D sw = softmax_rows(wild);
  for (Eigen::Index i = 0; i < sw.rows(); ++i) {
    CHECK(std::abs(sw.row(i).sum() - 1.0) < 1e-12);
    CHECK(sw.row(i).minCoeff() >= 0.0);
  }
}

TEST_CASE("adam zero gradient is a fixed point") {
  ParameterStore store(1);
  store.add("w", random_mat(4, 3, 2));
  Dense2D before = store.get("w").value;
  store.zero_grads();
  adam_step(store, 0.1);
  CHECK(store.get("w").value == before);  // bitwise
}

TEST_CASE("adam first step moves by about lr") {
  ParameterStore store(1);
  store.add("v", Dense2D::Zero(1, 1));
  store.get("v").grad(0, 0) = 1.0;
  adam_step(store, 0.1);
  CHECK(store.get("v").value(0, 0) == doctest::Approx(-0.1).epsilon(1e-6));
  CHECK(store.get("v").step_count == 1);
}

TEST_CASE("adam rejects non-finite gradients") {
  ParameterStore store(1);
  store.add("w", Dense2D::Zero(2, 2));
  store.get("w").grad(1, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(adam_step(store, 0.1), NonFiniteGradient);
}

TEST_CASE("finite_diff_check on a quadratic") {
  ParameterStore store(3);
  store.add("w", random_mat(4, 4, 9));
  auto loss_fn = [](ParameterStore& s) {
    Parameter& w = s.get("w");
    w.grad += w.value;  // d/dw of 0.5 * ||w||^2
    return 0.5 * w.value.squaredNorm();
  };
  CHECK(finite_diff_check(loss_fn, store, 1e-5, 32) < 1e-9);
}

TEST_CASE("finite_diff_check with no parameters") {
  ParameterStore store(3);
  auto loss_fn = [](ParameterStore&) { return 1.0; };
  CHECK(finite_diff_check(loss_fn, store, 1e-5, 32) == 0.0);
}

TEST_CASE("dropout_edges") {
  std::vector<int> edges(10000);
  for (std::size_t i = 0; i < edges.size(); ++i) edges[i] = static_cast<int>(i);

  CHECK(dropout_edges(edges, 0.0, 123) == edges);

  auto kept = dropout_edges(edges, 0.4, 7);
  double sigma = std::sqrt(10000 * 0.4 * 0.6);
  CHECK(std::abs(static_cast<double>(kept.size()) - 6000.0) < 3.0 * sigma);

  CHECK(dropout_edges(edges, 0.4, 7) == kept);               // same seed
  CHECK(dropout_edges(edges, 0.4, 8) != kept);               // different seed
  CHECK_THROWS_AS(dropout_edges(edges, 1.0, 1), BadRate);
  CHECK_THROWS_AS(dropout_edges(edges, -0.1, 1), BadRate);
}

TEST_CASE("snapshot round trip is bitwise") {
  ParameterStore store(5);
  store.add("alpha", random_mat(3, 7, 10));
  store.add("beta/gamma", random_mat(1, 1, 11));
  store.add("delta", random_mat(16, 2, 12));

  auto dir = std::filesystem::temp_directory_path() / "hetkg_snap_test";
  std::filesystem::remove_all(dir);
  save_snapshot(store, dir);
  ParameterStore loaded = load_snapshot(dir);
  REQUIRE(loaded.size() == store.size());
  for (std::size_t i = 0; i < store.size(); ++i) {
    CHECK(loaded.at(i).name == store.at(i).name);
    CHECK(loaded.at(i).value == store.at(i).value);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("every tape op matches central finite differences") {
  auto check = [](const char* name, double err) {
    INFO(name);
    CHECK(err < 1e-4);
  };

  check("matmul", op_gradcheck(
                      [](Tape& t, std::vector<Value>& in) { return t.matmul(in[0], in[1]); },
                      {random_mat(5, 4, 1), random_mat(4, 3, 2)}, 21));
  check("add", op_gradcheck([](Tape& t, std::vector<Value>& in) { return t.add(in[0], in[1]); },
                            {random_mat(4, 4, 3), random_mat(4, 4, 4)}, 22));
  check("sub", op_gradcheck([](Tape& t, std::vector<Value>& in) { return t.sub(in[0], in[1]); },
                            {random_mat(4, 4, 5), random_mat(4, 4, 6)}, 23));
  check("cmul", op_gradcheck([](Tape& t, std::vector<Value>& in) { return t.cmul(in[0], in[1]); },
                             {random_mat(4, 4, 7), random_mat(4, 4, 8)}, 24));
  check("add_rowvec",
        op_gradcheck([](Tape& t, std::vector<Value>& in) { return t.add_rowvec(in[0], in[1]); },
                     {random_mat(5, 3, 9), random_mat(1, 3, 10)}, 25));
  check("scale_const",
        op_gradcheck([](Tape& t, std::vector<Value>& in) { return t.scale_const(in[0], -2.5); },
                     {random_mat(4, 4, 11)}, 26));
  check("scale_rows_const", op_gradcheck(
                                [](Tape& t, std::vector<Value>& in) {
                                  Vector s(4);
                                  s << 0.5, -1.0, 2.0, 0.25;
                                  return t.scale_rows_const(in[0], s);
                                },
                                {random_mat(4, 3, 12)}, 27));
  check("scale_rows",
        op_gradcheck([](Tape& t, std::vector<Value>& in) { return t.scale_rows(in[0], in[1]); },
                     {random_mat(4, 3, 13), random_mat(4, 1, 14)}, 28));
  // keep relu/leaky inputs away from the kink
  Dense2D relu_in = random_mat(4, 4, 15);
  relu_in = relu_in.unaryExpr([](double x) { return std::abs(x) < 0.05 ? x + 0.2 : x; });
  check("relu", op_gradcheck([](Tape& t, std::vector<Value>& in) { return t.relu(in[0]); },
                             {relu_in}, 29));
  check("leaky_relu",
        op_gradcheck([](Tape& t, std::vector<Value>& in) { return t.leaky_relu(in[0], 0.2); },
                     {relu_in}, 30));
  check("sigmoid", op_gradcheck([](Tape& t, std::vector<Value>& in) { return t.sigmoid(in[0]); },
                                {random_mat(4, 4, 16)}, 31));
  check("tanh", op_gradcheck([](Tape& t, std::vector<Value>& in) { return t.tanh(in[0]); },
                             {random_mat(4, 4, 17)}, 32));
  check("softplus", op_gradcheck([](Tape& t, std::vector<Value>& in) { return t.softplus(in[0]); },
                                 {random_mat(4, 4, 18)}, 33));
  check("softmax_rows",
        op_gradcheck([](Tape& t, std::vector<Value>& in) { return t.softmax_rows(in[0]); },
                     {random_mat(4, 5, 19)}, 34));
  check("gather_rows", op_gradcheck(
                           [](Tape& t, std::vector<Value>& in) {
                             return t.gather_rows(in[0], {3, 0, 0, 2});
                           },
                           {random_mat(4, 3, 20)}, 35));
  check("segment_sum", op_gradcheck(
                           [](Tape& t, std::vector<Value>& in) {
                             return t.segment_sum(in[0], {2, 0, 2, 1, 2}, 3);
                           },
                           {random_mat(5, 3, 21)}, 36));
  check("segment_softmax", op_gradcheck(
                               [](Tape& t, std::vector<Value>& in) {
                                 return t.segment_softmax(in[0], {0, 1, 0, 1, 0, 2}, 3);
                               },
                               {random_mat(6, 1, 22)}, 37));
  check("row_dot",
        op_gradcheck([](Tape& t, std::vector<Value>& in) { return t.row_dot(in[0], in[1]); },
                     {random_mat(4, 3, 23), random_mat(4, 3, 24)}, 38));
  check("row_sum", op_gradcheck([](Tape& t, std::vector<Value>& in) { return t.row_sum(in[0]); },
                                {random_mat(4, 5, 25)}, 39));
  check("cols", op_gradcheck([](Tape& t, std::vector<Value>& in) { return t.cols(in[0], 1, 2); },
                             {random_mat(4, 5, 26)}, 40));
  check("concat_cols",
        op_gradcheck([](Tape& t, std::vector<Value>& in) { return t.concat_cols({in[0], in[1]}); },
                     {random_mat(4, 2, 27), random_mat(4, 3, 28)}, 41));
  check("concat_rows",
        op_gradcheck([](Tape& t, std::vector<Value>& in) { return t.concat_rows({in[0], in[1]}); },
                     {random_mat(2, 4, 29), random_mat(3, 4, 30)}, 42));
  check("transpose",
        op_gradcheck([](Tape& t, std::vector<Value>& in) { return t.transpose(in[0]); },
                     {random_mat(3, 5, 31)}, 43));
  check("score_triples", op_gradcheck(
                             [](Tape& t, std::vector<Value>& in) {
                               return t.score_triples(in[0], in[1], {0, 2, 1}, {0, 1, 0},
                                                      {3, 1, 1});
                             },
                             {random_mat(4, 6, 32), random_mat(2, 6, 33)}, 44));
}

TEST_CASE("tape reuses parameter leaves and accumulates their gradients") {
  ParameterStore store(2);
  store.add("w", random_mat(3, 3, 50));
  Tape tape;
  Value a = tape.leaf(store.get("w"));
  Value b = tape.leaf(store.get("w"));
  Value loss = tape.sum_all(tape.add(a, b));
  store.zero_grads();
  tape.backward(loss);
  CHECK(store.get("w").grad.isApprox(Dense2D::Constant(3, 3, 2.0)));
}

TEST_CASE("backward demands a scalar loss") {
  Tape tape;
  Value v = tape.constant(Dense2D::Zero(2, 2));
  CHECK_THROWS_AS(tape.backward(v), ShapeMismatch);
}
