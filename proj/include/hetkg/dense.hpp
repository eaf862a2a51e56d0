#pragma once

#include <Eigen/Dense>

#include "hetkg/error.hpp"

namespace hetkg {

// Row-major 64-bit dense matrix; the one array type the whole artifact
// computes with. Row-major so parameter snapshots are plain row-major dumps.
using Dense2D = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

inline bool all_finite(const Dense2D& m) { return m.allFinite(); }

Dense2D matmul(const Dense2D& a, const Dense2D& b);

// Numerically stable row softmax (max subtraction per row). Rows sum to 1
// within 1e-12 for any finite input.
Dense2D softmax_rows(const Dense2D& m);

inline Dense2D relu(const Dense2D& m) { return m.cwiseMax(0.0); }

inline Dense2D leaky_relu(const Dense2D& m, double slope) {
  return m.unaryExpr([slope](double x) { return x > 0.0 ? x : slope * x; });
}

inline double softplus(double x) {
  // log(1 + e^x) without overflow for large |x|
  return std::log1p(std::exp(-std::abs(x))) + std::max(x, 0.0);
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace hetkg
