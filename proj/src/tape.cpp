#include "hetkg/tape.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace hetkg {

namespace {

void check_same_shape(const Dense2D& a, const Dense2D& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeMismatch(std::string(op) + ": " + std::to_string(a.rows()) + "x" +
                        std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                        std::to_string(b.cols()));
  }
}

}  // namespace

Value Tape::push(Dense2D val, bool needs_grad, std::function<void(Tape&, int)> back) {
  Node n;
  n.val = std::move(val);
  n.needs_grad = needs_grad;
  n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return Value(this, static_cast<int>(nodes_.size()) - 1);
}

Dense2D& Tape::grad_of(int id) {
  Node& n = nodes_[id];
  if (!n.grad_live) {
    n.grad = Dense2D::Zero(n.val.rows(), n.val.cols());
    n.grad_live = true;
  }
  return n.grad;
}

Value Tape::constant(Dense2D v) { return push(std::move(v), false, {}); }

Value Tape::constant_scalar(double v) {
  Dense2D m(1, 1);
  m(0, 0) = v;
  return push(std::move(m), false, {});
}

Value Tape::leaf(Parameter& p) {
  auto it = leaf_ids_.find(&p);
  if (it != leaf_ids_.end()) return Value(this, it->second);
  Value v = push(p.value, true, {});
  leaf_ids_[&p] = v.id_;
  leaves_.emplace_back(&p, v.id_);
  return v;
}

Value Tape::matmul(Value a, Value b) {
  const Dense2D& av = value(a);
  const Dense2D& bv = value(b);
  if (av.cols() != bv.rows()) {
    throw ShapeMismatch("tape matmul: " + std::to_string(av.cols()) + " vs " +
                        std::to_string(bv.rows()));
  }
  bool ng = wants(a) || wants(b);
  int ai = a.id_, bi = b.id_;
  return push(av * bv, ng, [ai, bi](Tape& t, int self) {
    const Dense2D& g = t.grad(self);
    t.accum(ai, g * t.nodes_[bi].val.transpose());
    t.accum(bi, t.nodes_[ai].val.transpose() * g);
  });
}

Value Tape::add(Value a, Value b) {
  check_same_shape(value(a), value(b), "add");
  int ai = a.id_, bi = b.id_;
  return push(value(a) + value(b), wants(a) || wants(b), [ai, bi](Tape& t, int self) {
    t.accum(ai, t.grad(self));
    t.accum(bi, t.grad(self));
  });
}

Value Tape::sub(Value a, Value b) {
  check_same_shape(value(a), value(b), "sub");
  int ai = a.id_, bi = b.id_;
  return push(value(a) - value(b), wants(a) || wants(b), [ai, bi](Tape& t, int self) {
    t.accum(ai, t.grad(self));
    t.accum(bi, -t.grad(self));
  });
}

Value Tape::cmul(Value a, Value b) {
  check_same_shape(value(a), value(b), "cmul");
  int ai = a.id_, bi = b.id_;
  return push(value(a).cwiseProduct(value(b)), wants(a) || wants(b),
              [ai, bi](Tape& t, int self) {
                const Dense2D& g = t.grad(self);
                t.accum(ai, g.cwiseProduct(t.nodes_[bi].val));
                t.accum(bi, g.cwiseProduct(t.nodes_[ai].val));
              });
}

Value Tape::add_rowvec(Value a, Value row) {
  const Dense2D& av = value(a);
  const Dense2D& rv = value(row);
  if (rv.rows() != 1 || rv.cols() != av.cols()) throw ShapeMismatch("add_rowvec");
  int ai = a.id_, ri = row.id_;
  Dense2D out = av;
  out.rowwise() += rv.row(0);
  return push(std::move(out), wants(a) || wants(row), [ai, ri](Tape& t, int self) {
    const Dense2D& g = t.grad(self);
    t.accum(ai, g);
    t.accum(ri, g.colwise().sum());
  });
}

Value Tape::scale_const(Value a, double c) {
  int ai = a.id_;
  return push(value(a) * c, wants(a),
              [ai, c](Tape& t, int self) { t.accum(ai, t.grad(self) * c); });
}

Value Tape::add_constant(Value a, const Dense2D& c) {
  check_same_shape(value(a), c, "add_constant");
  int ai = a.id_;
  return push(value(a) + c, wants(a),
              [ai](Tape& t, int self) { t.accum(ai, t.grad(self)); });
}

Value Tape::scale_rows_const(Value a, const Vector& s) {
  const Dense2D& av = value(a);
  if (s.size() != av.rows()) throw ShapeMismatch("scale_rows_const");
  int ai = a.id_;
  Vector sc = s;
  Dense2D out = (av.array().colwise() * sc.array()).matrix();
  return push(std::move(out), wants(a), [ai, sc](Tape& t, int self) {
    t.accum(ai, (t.grad(self).array().colwise() * sc.array()).matrix());
  });
}

Value Tape::scale_rows(Value a, Value s) {
  const Dense2D& av = value(a);
  const Dense2D& sv = value(s);
  if (sv.cols() != 1 || sv.rows() != av.rows()) throw ShapeMismatch("scale_rows");
  int ai = a.id_, si = s.id_;
  Dense2D out = (av.array().colwise() * sv.col(0).array()).matrix();
  return push(std::move(out), wants(a) || wants(s), [ai, si](Tape& t, int self) {
    const Dense2D& g = t.grad(self);
    const Dense2D& av2 = t.nodes_[ai].val;
    const Dense2D& sv2 = t.nodes_[si].val;
    t.accum(ai, (g.array().colwise() * sv2.col(0).array()).matrix());
    t.accum(si, g.cwiseProduct(av2).rowwise().sum());
  });
}

Value Tape::relu(Value a) {
  int ai = a.id_;
  return push(value(a).cwiseMax(0.0), wants(a), [ai](Tape& t, int self) {
    const Dense2D& x = t.nodes_[ai].val;
    t.accum(ai, (t.grad(self).array() * (x.array() > 0.0).cast<double>()).matrix());
  });
}

Value Tape::leaky_relu(Value a, double slope) {
  int ai = a.id_;
  Dense2D out = value(a).unaryExpr([slope](double x) { return x > 0.0 ? x : slope * x; });
  return push(std::move(out), wants(a), [ai, slope](Tape& t, int self) {
    const Dense2D& x = t.nodes_[ai].val;
    Dense2D d = x.unaryExpr([slope](double v) { return v > 0.0 ? 1.0 : slope; });
    t.accum(ai, t.grad(self).cwiseProduct(d));
  });
}

Value Tape::sigmoid(Value a) {
  int ai = a.id_;
  Dense2D out = value(a).unaryExpr([](double x) { return hetkg::sigmoid(x); });
  return push(std::move(out), wants(a), [ai](Tape& t, int self) {
    const Dense2D& y = t.nodes_[self].val;
    t.accum(ai, (t.grad(self).array() * y.array() * (1.0 - y.array())).matrix());
  });
}

Value Tape::tanh(Value a) {
  int ai = a.id_;
  Dense2D out = value(a).array().tanh().matrix();
  return push(std::move(out), wants(a), [ai](Tape& t, int self) {
    const Dense2D& y = t.nodes_[self].val;
    t.accum(ai, (t.grad(self).array() * (1.0 - y.array().square())).matrix());
  });
}

Value Tape::softplus(Value a) {
  int ai = a.id_;
  Dense2D out = value(a).unaryExpr([](double x) { return hetkg::softplus(x); });
  return push(std::move(out), wants(a), [ai](Tape& t, int self) {
    const Dense2D& x = t.nodes_[ai].val;
    Dense2D d = x.unaryExpr([](double v) { return hetkg::sigmoid(v); });
    t.accum(ai, t.grad(self).cwiseProduct(d));
  });
}

Value Tape::softmax_rows(Value a) {
  int ai = a.id_;
  Dense2D out = hetkg::softmax_rows(value(a));
  return push(std::move(out), wants(a), [ai](Tape& t, int self) {
    const Dense2D& y = t.nodes_[self].val;
    const Dense2D& g = t.grad(self);
    Dense2D gx(y.rows(), y.cols());
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
      double dot = g.row(i).dot(y.row(i));
      gx.row(i) = (y.row(i).array() * (g.row(i).array() - dot)).matrix();
    }
    t.accum(ai, gx);
  });
}

Value Tape::gather_rows(Value a, std::vector<std::int32_t> idx) {
  const Dense2D& av = value(a);
  Dense2D out(static_cast<Eigen::Index>(idx.size()), av.cols());
  for (std::size_t k = 0; k < idx.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = av.row(idx[k]);
  int ai = a.id_;
  auto ix = std::move(idx);
  return push(std::move(out), wants(a), [ai, ix](Tape& t, int self) {
    if (!t.nodes_[ai].needs_grad) return;
    const Dense2D& g = t.grad(self);
    Dense2D& ga = t.grad_of(ai);
    for (std::size_t k = 0; k < ix.size(); ++k) ga.row(ix[k]) += g.row(static_cast<Eigen::Index>(k));
  });
}

Value Tape::segment_sum(Value a, std::vector<std::int32_t> seg, Eigen::Index n_out) {
  const Dense2D& av = value(a);
  if (static_cast<Eigen::Index>(seg.size()) != av.rows()) throw ShapeMismatch("segment_sum");
  Dense2D out = Dense2D::Zero(n_out, av.cols());
  for (std::size_t k = 0; k < seg.size(); ++k) out.row(seg[k]) += av.row(static_cast<Eigen::Index>(k));
  int ai = a.id_;
  auto sg = std::move(seg);
  return push(std::move(out), wants(a), [ai, sg](Tape& t, int self) {
    if (!t.nodes_[ai].needs_grad) return;
    const Dense2D& g = t.grad(self);
    Dense2D& ga = t.grad_of(ai);
    for (std::size_t k = 0; k < sg.size(); ++k) ga.row(static_cast<Eigen::Index>(k)) += g.row(sg[k]);
  });
}

Value Tape::segment_softmax(Value a, std::vector<std::int32_t> seg, Eigen::Index n_segments) {
  const Dense2D& av = value(a);
  if (av.cols() != 1 || static_cast<Eigen::Index>(seg.size()) != av.rows()) {
    throw ShapeMismatch("segment_softmax expects n x 1 logits");
  }
  Vector mx = Vector::Constant(n_segments, -std::numeric_limits<double>::infinity());
  for (std::size_t k = 0; k < seg.size(); ++k) mx[seg[k]] = std::max(mx[seg[k]], av(static_cast<Eigen::Index>(k), 0));
  Dense2D out(av.rows(), 1);
  Vector denom = Vector::Zero(n_segments);
  for (std::size_t k = 0; k < seg.size(); ++k) {
    double e = std::exp(av(static_cast<Eigen::Index>(k), 0) - mx[seg[k]]);
    out(static_cast<Eigen::Index>(k), 0) = e;
    denom[seg[k]] += e;
  }
  for (std::size_t k = 0; k < seg.size(); ++k) out(static_cast<Eigen::Index>(k), 0) /= denom[seg[k]];
  int ai = a.id_;
  auto sg = std::move(seg);
  return push(std::move(out), wants(a), [ai, sg, n_segments](Tape& t, int self) {
    if (!t.nodes_[ai].needs_grad) return;
    const Dense2D& y = t.nodes_[self].val;
    const Dense2D& g = t.grad(self);
    Vector dots = Vector::Zero(n_segments);
    for (std::size_t k = 0; k < sg.size(); ++k) dots[sg[k]] += g(static_cast<Eigen::Index>(k), 0) * y(static_cast<Eigen::Index>(k), 0);
    Dense2D& ga = t.grad_of(ai);
    for (std::size_t k = 0; k < sg.size(); ++k) {
      auto ki = static_cast<Eigen::Index>(k);
      ga(ki, 0) += y(ki, 0) * (g(ki, 0) - dots[sg[k]]);
    }
  });
}

Value Tape::row_dot(Value a, Value b) {
  check_same_shape(value(a), value(b), "row_dot");
  int ai = a.id_, bi = b.id_;
  Dense2D out = value(a).cwiseProduct(value(b)).rowwise().sum();
  return push(std::move(out), wants(a) || wants(b), [ai, bi](Tape& t, int self) {
    const Dense2D& g = t.grad(self);
    t.accum(ai, (t.nodes_[bi].val.array().colwise() * g.col(0).array()).matrix());
    t.accum(bi, (t.nodes_[ai].val.array().colwise() * g.col(0).array()).matrix());
  });
}

Value Tape::row_sum(Value a) {
  int ai = a.id_;
  Eigen::Index ncols = value(a).cols();
  Dense2D out = value(a).rowwise().sum();
  return push(std::move(out), wants(a), [ai, ncols](Tape& t, int self) {
    const Dense2D& g = t.grad(self);
    t.accum(ai, g.col(0).replicate(1, ncols));
  });
}

Value Tape::cols(Value a, Eigen::Index first, Eigen::Index n) {
  const Dense2D& av = value(a);
  if (first < 0 || n < 0 || first + n > av.cols()) throw ShapeMismatch("cols slice");
  int ai = a.id_;
  Dense2D out = av.middleCols(first, n);
  return push(std::move(out), wants(a), [ai, first, n](Tape& t, int self) {
    if (!t.nodes_[ai].needs_grad) return;
    t.grad_of(ai).middleCols(first, n) += t.grad(self);
  });
}

Value Tape::concat_cols(const std::vector<Value>& parts) {
  if (parts.empty()) throw ShapeMismatch("concat_cols of nothing");
  Eigen::Index rows = value(parts[0]).rows();
  Eigen::Index total = 0;
  bool ng = false;
  for (Value p : parts) {
    if (value(p).rows() != rows) throw ShapeMismatch("concat_cols rows");
    total += value(p).cols();
    ng = ng || wants(p);
  }
  Dense2D out(rows, total);
  Eigen::Index at = 0;
  std::vector<std::pair<int, Eigen::Index>> spans;
  for (Value p : parts) {
    Eigen::Index w = value(p).cols();
    out.middleCols(at, w) = value(p);
    spans.emplace_back(p.id_, w);
    at += w;
  }
  return push(std::move(out), ng, [spans](Tape& t, int self) {
    const Dense2D& g = t.grad(self);
    Eigen::Index at2 = 0;
    for (auto [id, w] : spans) {
      t.accum(id, g.middleCols(at2, w));
      at2 += w;
    }
  });
}

Value Tape::concat_rows(const std::vector<Value>& parts) {
  if (parts.empty()) throw ShapeMismatch("concat_rows of nothing");
  Eigen::Index cols_n = value(parts[0]).cols();
  Eigen::Index total = 0;
  bool ng = false;
  for (Value p : parts) {
    if (value(p).cols() != cols_n) throw ShapeMismatch("concat_rows cols");
    total += value(p).rows();
    ng = ng || wants(p);
  }
  Dense2D out(total, cols_n);
  Eigen::Index at = 0;
  std::vector<std::pair<int, Eigen::Index>> spans;
  for (Value p : parts) {
    Eigen::Index h = value(p).rows();
    out.middleRows(at, h) = value(p);
    spans.emplace_back(p.id_, h);
    at += h;
  }
  return push(std::move(out), ng, [spans](Tape& t, int self) {
    const Dense2D& g = t.grad(self);
    Eigen::Index at2 = 0;
    for (auto [id, h] : spans) {
      t.accum(id, g.middleRows(at2, h));
      at2 += h;
    }
  });
}

Value Tape::transpose(Value a) {
  int ai = a.id_;
  return push(value(a).transpose(), wants(a), [ai](Tape& t, int self) {
    t.accum(ai, t.grad(self).transpose());
  });
}

Value Tape::sum_all(Value a) {
  int ai = a.id_;
  Dense2D out(1, 1);
  out(0, 0) = value(a).sum();
  Eigen::Index r = value(a).rows(), c = value(a).cols();
  return push(std::move(out), wants(a), [ai, r, c](Tape& t, int self) {
    t.accum(ai, Dense2D::Constant(r, c, t.grad(self)(0, 0)));
  });
}

Value Tape::mean_all(Value a) {
  Eigen::Index n = value(a).size();
  return scale_const(sum_all(a), n > 0 ? 1.0 / static_cast<double>(n) : 0.0);
}

Value Tape::score_triples(Value emb, Value rel, std::vector<std::int32_t> heads,
                          std::vector<std::int32_t> rels, std::vector<std::int32_t> tails) {
  const Dense2D& e = value(emb);
  const Dense2D& r = value(rel);
  if (e.cols() != r.cols()) throw ShapeMismatch("score_triples dims");
  if (heads.size() != rels.size() || heads.size() != tails.size()) {
    throw ShapeMismatch("score_triples index lists");
  }
  auto n = static_cast<Eigen::Index>(heads.size());
  Dense2D out(n, 1);
  for (Eigen::Index k = 0; k < n; ++k) {
    out(k, 0) = e.row(heads[k]).cwiseProduct(r.row(rels[k])).dot(e.row(tails[k]));
  }
  int ei = emb.id_, ri = rel.id_;
  bool ng = wants(emb) || wants(rel);
  auto hs = std::move(heads);
  auto rs = std::move(rels);
  auto ts = std::move(tails);
  return push(std::move(out), ng, [ei, ri, hs, rs, ts](Tape& t, int self) {
    const Dense2D& g = t.grad(self);
    const Dense2D& e2 = t.nodes_[ei].val;
    const Dense2D& r2 = t.nodes_[ri].val;
    bool we = t.nodes_[ei].needs_grad;
    bool wr = t.nodes_[ri].needs_grad;
    Dense2D* ge = we ? &t.grad_of(ei) : nullptr;
    Dense2D* gr = wr ? &t.grad_of(ri) : nullptr;
    for (std::size_t k = 0; k < hs.size(); ++k) {
      double gk = g(static_cast<Eigen::Index>(k), 0);
      auto h = hs[k];
      auto rr = rs[k];
      auto tl = ts[k];
      if (we) {
        ge->row(h) += gk * r2.row(rr).cwiseProduct(e2.row(tl));
        ge->row(tl) += gk * r2.row(rr).cwiseProduct(e2.row(h));
      }
      if (wr) gr->row(rr) += gk * e2.row(h).cwiseProduct(e2.row(tl));
    }
  });
}

void Tape::backward(Value loss) {
  const Dense2D& lv = value(loss);
  if (lv.rows() != 1 || lv.cols() != 1) throw ShapeMismatch("backward expects a 1x1 loss");
  grad_of(loss.id_)(0, 0) += 1.0;
  for (int i = loss.id_; i >= 0; --i) {
    Node& n = nodes_[i];
    if (!n.needs_grad || !n.grad_live || !n.back) continue;
    n.back(*this, i);
  }
  for (auto [p, id] : leaves_) {
    if (nodes_[id].grad_live) p->grad += nodes_[id].grad;
  }
}

}  // namespace hetkg
