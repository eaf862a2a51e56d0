#include "hetkg/params.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hetkg {

Parameter& ParameterStore::add(const std::string& name, Dense2D init) {
  if (index_.count(name)) throw ConfigError("duplicate parameter name: " + name);
  index_[name] = params_.size();
  params_.push_back(std::make_unique<Parameter>(name, std::move(init)));
  return *params_.back();
}

Parameter& ParameterStore::get_or_add(const std::string& name, Eigen::Index rows,
                                      Eigen::Index cols, const std::function<Dense2D()>& init) {
  auto it = index_.find(name);
  if (it != index_.end()) {
    Parameter& p = *params_[it->second];
    if (p.value.rows() != rows || p.value.cols() != cols) {
      throw ShapeMismatch("parameter " + name + " has shape " + std::to_string(p.value.rows()) +
                          "x" + std::to_string(p.value.cols()) + ", expected " +
                          std::to_string(rows) + "x" + std::to_string(cols));
    }
    return p;
  }
  Dense2D v = init();
  if (v.rows() != rows || v.cols() != cols) throw ShapeMismatch("init shape for " + name);
  return add(name, std::move(v));
}

Parameter& ParameterStore::get(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end()) throw KindMismatch("missing parameter: " + name);
  return *params_[it->second];
}

const Parameter& ParameterStore::get(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw KindMismatch("missing parameter: " + name);
  return *params_[it->second];
}

void ParameterStore::zero_grads() {
  for (auto& p : params_) p->grad.setZero();
}

std::size_t ParameterStore::coordinate_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += static_cast<std::size_t>(p->value.size());
  return n;
}

void adam_step(ParameterStore& store, double lr, double beta1, double beta2, double eps) {
  for (std::size_t i = 0; i < store.size(); ++i) {
    Parameter& p = store.at(i);
    if (!all_finite(p.grad)) throw NonFiniteGradient("parameter " + p.name);
    p.step_count += 1;
    double bc1 = 1.0 - std::pow(beta1, static_cast<double>(p.step_count));
    double bc2 = 1.0 - std::pow(beta2, static_cast<double>(p.step_count));
    p.adam_m = beta1 * p.adam_m + (1.0 - beta1) * p.grad;
    p.adam_v = (beta2 * p.adam_v.array() + (1.0 - beta2) * p.grad.array().square()).matrix();
    p.value.array() -=
        lr * (p.adam_m.array() / bc1) / ((p.adam_v.array() / bc2).sqrt() + eps);
  }
}

double finite_diff_check(const std::function<double(ParameterStore&)>& loss_fn,
                         ParameterStore& store, double epsilon, std::size_t sample) {
  std::size_t total = store.coordinate_count();
  if (total == 0 || sample == 0) return 0.0;

  store.zero_grads();
  loss_fn(store);
  std::vector<Dense2D> analytic;
  analytic.reserve(store.size());
  for (std::size_t i = 0; i < store.size(); ++i) analytic.push_back(store.at(i).grad);

  Rng rng(mix64(store.rng_seed(), 0xF1D1FFull));
  double worst = 0.0;
  for (std::size_t s = 0; s < sample; ++s) {
    std::size_t flat = rng.below(total);
    std::size_t pi = 0;
    while (flat >= static_cast<std::size_t>(store.at(pi).value.size())) {
      flat -= static_cast<std::size_t>(store.at(pi).value.size());
      ++pi;
    }
    double* slot = store.at(pi).value.data() + flat;
    double saved = *slot;

    *slot = saved + epsilon;
    store.zero_grads();
    double fp = loss_fn(store);
    *slot = saved - epsilon;
    store.zero_grads();
    double fm = loss_fn(store);
    *slot = saved;

    double numeric = (fp - fm) / (2.0 * epsilon);
    double a = analytic[pi].data()[flat];
    double rel = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-8});
    worst = std::max(worst, rel);
  }
  // restore gradients to the analytic ones so callers can inspect them
  store.zero_grads();
  loss_fn(store);
  return worst;
}

void save_snapshot(const ParameterStore& store, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ostringstream manifest;
  for (std::size_t i = 0; i < store.size(); ++i) {
    const Parameter& p = store.at(i);
    char fname[32];
    std::snprintf(fname, sizeof(fname), "p%05zu.f64", i);
    std::ofstream out(dir / fname, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + (dir / fname).string());
    out.write(reinterpret_cast<const char*>(p.value.data()),
              static_cast<std::streamsize>(p.value.size() * sizeof(double)));
    manifest << p.name << '\t' << p.value.rows() << '\t' << p.value.cols() << '\t' << 0 << '\t'
             << p.value.size() << '\n';
  }
  std::ofstream mf(dir / "manifest.txt", std::ios::trunc);
  if (!mf) throw IoError("cannot write manifest in " + dir.string());
  mf << manifest.str();
}

ParameterStore load_snapshot(const std::filesystem::path& dir) {
  std::ifstream mf(dir / "manifest.txt");
  if (!mf) throw IoError("missing manifest in " + dir.string());
  ParameterStore store;
  std::string line;
  std::size_t idx = 0;
  while (std::getline(mf, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string name;
    Eigen::Index rows, cols;
    std::int64_t offset, count;
    if (!(std::getline(ls, name, '\t') && ls >> rows >> cols >> offset >> count)) {
      throw IoError("malformed manifest line: " + line);
    }
    if (count != rows * cols) throw IoError("manifest count mismatch for " + name);
    char fname[32];
    std::snprintf(fname, sizeof(fname), "p%05zu.f64", idx++);
    std::ifstream in(dir / fname, std::ios::binary);
    if (!in) throw IoError("missing snapshot file " + (dir / fname).string());
    in.seekg(offset);
    Dense2D v(rows, cols);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(count * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(count * sizeof(double))) {
      throw IoError("short read in " + (dir / fname).string());
    }
    store.add(name, std::move(v));
  }
  return store;
}

}  // namespace hetkg
