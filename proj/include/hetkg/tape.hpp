#pragma once

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "hetkg/params.hpp"

namespace hetkg {

class Tape;

// Lightweight handle into a Tape. Valid only as long as its tape lives.
class Value {
 public:
  Value() = default;
  const Dense2D& mat() const;
  Eigen::Index rows() const { return mat().rows(); }
  Eigen::Index cols() const { return mat().cols(); }
  double scalar() const { return mat()(0, 0); }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Value(Tape* t, int id) : tape_(t), id_(id) {}
  Tape* tape_ = nullptr;
  int id_ = -1;
};

// Reverse-mode gradient tape over a fixed operation repertoire: matmul,
// elementwise arithmetic and nonlinearities, row softmax, gather/scatter over
// index lists, segment softmax/sum, slicing and concatenation, reductions.
// Nodes are recorded in construction order, which is already a topological
// order, and backward() sweeps it in reverse. Leaves bound to Parameters
// accumulate into Parameter::grad.
class Tape {
 public:
  Value constant(Dense2D v);
  Value constant_scalar(double v);
  // One leaf per Parameter per tape; repeated calls return the same node.
  Value leaf(Parameter& p);

  Value matmul(Value a, Value b);
  Value add(Value a, Value b);
  Value sub(Value a, Value b);
  Value cmul(Value a, Value b);
  Value add_rowvec(Value a, Value row);      // row: 1 x d, broadcast over rows
  Value scale_const(Value a, double c);
  Value add_constant(Value a, const Dense2D& c);
  Value scale_rows_const(Value a, const Vector& s);  // no gradient into s
  Value scale_rows(Value a, Value s);        // s: n x 1

  Value relu(Value a);
  Value leaky_relu(Value a, double slope);
  Value sigmoid(Value a);
  Value tanh(Value a);
  Value softplus(Value a);
  Value softmax_rows(Value a);

  Value gather_rows(Value a, std::vector<std::int32_t> idx);
  // out.row(seg[k]) += a.row(k); out has n_out rows.
  Value segment_sum(Value a, std::vector<std::int32_t> seg, Eigen::Index n_out);
  // Softmax over groups of rows of an n x 1 column; stable via per-group max.
  Value segment_softmax(Value a, std::vector<std::int32_t> seg, Eigen::Index n_segments);

  Value row_dot(Value a, Value b);           // n x 1
  Value row_sum(Value a);                    // n x 1
  Value cols(Value a, Eigen::Index first, Eigen::Index n);
  Value concat_cols(const std::vector<Value>& parts);
  Value concat_rows(const std::vector<Value>& parts);
  Value transpose(Value a);
  Value sum_all(Value a);                    // 1 x 1
  Value mean_all(Value a);                   // 1 x 1

  // DistMult scores for a triple batch: score(e) = sum_k emb[h_e,k] *
  // rel[r_e,k] * emb[t_e,k]. Fused so the per-edge intermediates never
  // materialize.
  Value score_triples(Value emb, Value rel, std::vector<std::int32_t> heads,
                      std::vector<std::int32_t> rels, std::vector<std::int32_t> tails);

  // Seeds d(loss)/d(loss) = 1 and sweeps the tape in reverse, accumulating
  // leaf gradients into their Parameters. `loss` must be 1 x 1.
  void backward(Value loss);

  const Dense2D& value(Value v) const { return nodes_[v.id_].val; }
  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    Dense2D val;
    Dense2D grad;
    bool needs_grad = false;
    bool grad_live = false;
    std::function<void(Tape&, int)> back;  // empty for leaves/constants
  };

  friend class Value;

  Value push(Dense2D val, bool needs_grad, std::function<void(Tape&, int)> back);
  bool wants(Value v) const { return nodes_[v.id_].needs_grad; }
  Dense2D& grad_of(int id);
  const Dense2D& grad(int id) const { return nodes_[id].grad; }

  template <typename Expr>
  void accum(int id, const Expr& e) {
    if (!nodes_[id].needs_grad) return;
    grad_of(id) += e;
  }

  std::vector<Node> nodes_;
  std::unordered_map<const Parameter*, int> leaf_ids_;
  std::vector<std::pair<Parameter*, int>> leaves_;
};

inline const Dense2D& Value::mat() const { return tape_->value(*this); }

}  // namespace hetkg
