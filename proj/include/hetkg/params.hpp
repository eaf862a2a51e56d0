#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "hetkg/dense.hpp"
#include "hetkg/rng.hpp"

namespace hetkg {

// A named trainable array with its gradient accumulator and Adam state.
struct Parameter {
  std::string name;
  Dense2D value;
  Dense2D grad;
  Dense2D adam_m;
  Dense2D adam_v;
  std::int64_t step_count = 0;

  Parameter(std::string n, Dense2D v)
      : name(std::move(n)),
        value(std::move(v)),
        grad(Dense2D::Zero(value.rows(), value.cols())),
        adam_m(Dense2D::Zero(value.rows(), value.cols())),
        adam_v(Dense2D::Zero(value.rows(), value.cols())) {}
};

// Ordered collection of parameters. Iteration order is insertion order, which
// fixes snapshot layout and Adam update order. Parameters live behind stable
// addresses so model views can hold Parameter* across later registrations.
class ParameterStore {
 public:
  explicit ParameterStore(std::uint64_t rng_seed = 0) : rng_seed_(rng_seed) {}

  Parameter& add(const std::string& name, Dense2D init);
  // Returns the existing parameter when present (shape-checked), otherwise
  // adds one initialized by `init`.
  Parameter& get_or_add(const std::string& name, Eigen::Index rows, Eigen::Index cols,
                        const std::function<Dense2D()>& init);

  bool contains(const std::string& name) const { return index_.count(name) > 0; }
  Parameter& get(const std::string& name);
  const Parameter& get(const std::string& name) const;

  std::size_t size() const { return params_.size(); }
  Parameter& at(std::size_t i) { return *params_[i]; }
  const Parameter& at(std::size_t i) const { return *params_[i]; }

  std::uint64_t rng_seed() const { return rng_seed_; }
  void set_rng_seed(std::uint64_t s) { rng_seed_ = s; }

  void zero_grads();
  std::size_t coordinate_count() const;

 private:
  std::vector<std::unique_ptr<Parameter>> params_;
  std::unordered_map<std::string, std::size_t> index_;
  std::uint64_t rng_seed_ = 0;
};

// Standard Adam with bias correction. Gradients are left untouched; the
// caller zeroes them. Throws NonFiniteGradient when any gradient entry is
// NaN/Inf.
void adam_step(ParameterStore& store, double lr, double beta1 = 0.9, double beta2 = 0.999,
               double eps = 1e-8);

// Compares analytic gradients against central finite differences on `sample`
// randomly chosen coordinates. `loss_fn` must populate gradients in `store`
// (they are zeroed before the call) and be deterministic. Returns the max
// relative error |a - n| / max(|a|, |n|, 1e-8).
double finite_diff_check(const std::function<double(ParameterStore&)>& loss_fn,
                         ParameterStore& store, double epsilon, std::size_t sample);

// Independently retains each element with probability 1 - rate, using a
// counter-based draw keyed by (seed, index). Callers fold the epoch into the
// seed. Rate must lie in [0, 1).
template <typename T>
std::vector<T> dropout_edges(const std::vector<T>& edges, double rate, std::uint64_t seed) {
  if (!(rate >= 0.0 && rate < 1.0)) throw BadRate("dropout rate must be in [0,1)");
  std::vector<T> kept;
  kept.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (counter_uniform(seed, i) >= rate) kept.push_back(edges[i]);
  }
  return kept;
}

// Snapshot format: one raw little-endian float64 array per parameter
// (row-major), files p00000.f64, p00001.f64, ... in store order, plus
// manifest.txt with one line per parameter: name, rows, cols, byte offset
// (always 0), element count.
void save_snapshot(const ParameterStore& store, const std::filesystem::path& dir);
ParameterStore load_snapshot(const std::filesystem::path& dir);

}  // namespace hetkg
