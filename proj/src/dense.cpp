#include "hetkg/dense.hpp"

#include <string>

namespace hetkg {

Dense2D matmul(const Dense2D& a, const Dense2D& b) {
  if (a.cols() != b.rows()) {
    throw ShapeMismatch("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                        " * " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  return a * b;
}

Dense2D softmax_rows(const Dense2D& m) {
  Dense2D out(m.rows(), m.cols());
  if (m.cols() == 0) return out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double mx = m.row(i).maxCoeff();
    Eigen::ArrayXd e = (m.row(i).array() - mx).exp();
    out.row(i) = (e / e.sum()).matrix();
  }
  return out;
}

}  // namespace hetkg
