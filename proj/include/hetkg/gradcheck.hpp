#pragma once

#include <cstdint>
#include <string>

#include "hetkg/dense.hpp"
#include "hetkg/graph.hpp"

namespace hetkg {

// Finite-difference verification paths: the three encoders, the decoder in
// isolation, and the title/hybrid feature path in isolation.
enum class GradCheckKind { rgcn, hetgnn, hgt, distmult, features };

GradCheckKind parse_gradcheck_kind(const std::string& s);
std::string gradcheck_kind_name(GradCheckKind k);

// Hand-built 10-node fixture covering all five node types and all four
// relations, with titles and publication dates.
TypedGraph gradcheck_fixture();

// Max relative error between analytic gradients of the link-prediction loss
// and central finite differences over `samples` random coordinates. Guards
// dim <= 16 (finite differences over the full loss are quadratic in cost).
// epsilon <= 0 picks a per-path step: the recurrent aggregator runs long
// sigmoid/tanh chains whose smallest sampled gradients sit near 1e-8, where a
// 1e-5 step leaves the central difference dominated by rounding of the loss,
// so that path uses a larger step.
double gradcheck(GradCheckKind kind, Eigen::Index dim, std::uint64_t seed,
                 std::size_t samples = 160, double epsilon = 0.0);

}  // namespace hetkg
