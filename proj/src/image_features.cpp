#include "mnmt/image_features.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "mnmt/errors.hpp"
#include "mnmt/kernels.hpp"
#include "mnmt/ops.hpp"
#include "mnmt/serialize.hpp"

namespace mnmt {

ImageAnnotations load_features(const std::filesystem::path& path) {
  Tensor t = load_tensor(path);
  if (t.rank() == 3) {
    // (H, W, D) row-major flattens to (H·W, D) without moving any value.
    const std::size_t l = t.dim(0) * t.dim(1);
    const std::size_t d = t.dim(2);
    std::vector<double> data(t.values().begin(), t.values().end());
    t = Tensor({l, d}, std::move(data));
  } else if (t.rank() != 2) {
    throw InvalidFormat("feature file must be rank 2 or 3: " + path.string());
  }
  for (std::size_t r = 0; r < t.rows(); ++r) {
    const double* row = t.row(r);
    for (std::size_t c = 0; c < t.cols(); ++c) {
      if (!std::isfinite(row[c])) {
        throw DataError("non-finite feature value in row " + std::to_string(r) +
                        " of " + path.string());
      }
    }
  }
  return ImageAnnotations{std::move(t), false};
}

ImageAnnotations normalize_features(const ImageAnnotations& feats,
                                    NormGranularity granularity) {
  if (feats.normalized) {
    throw std::invalid_argument("normalize_features: input already normalized");
  }
  ImageAnnotations out;
  out.annotations = feats.annotations;
  out.normalized = true;
  Tensor& t = out.annotations;
  if (granularity == NormGranularity::row) {
    for (std::size_t r = 0; r < t.rows(); ++r) {
      l2_normalize_span(t.row(r), t.row(r), t.cols());
    }
  } else {
    l2_normalize_span(t.data(), t.data(), t.size());
  }
  return out;
}

ImageAnnotations synth_features(std::uint64_t seed, std::size_t l, std::size_t d,
                                FeatureStyle style) {
  if (l < 1 || d < 1) throw std::invalid_argument("synth_features: L, D must be >= 1");
  Rng rng(seed);
  Tensor t({l, d});
  for (double& v : t.values()) {
    v = std::abs(rng.gaussian());  // CNN-activation-like: nonnegative
    if (style == FeatureStyle::sparse && rng.uniform01() < 0.9) v = 0.0;
  }
  return ImageAnnotations{std::move(t), false};
}

FeatureStore FeatureStore::open(const std::filesystem::path& dir, bool normalize_rows) {
  const auto manifest = dir / "manifest.txt";
  std::ifstream in(manifest, std::ios::binary);
  if (!in) throw IoError("cannot open feature manifest: " + manifest.string());

  FeatureStore store;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string key;
    std::size_t l = 0, d = 0;
    {
      std::istringstream ss(line);
      if (!(ss >> key >> l >> d)) {
        throw InvalidFormat("bad manifest line at " + manifest.string() + ":" +
                            std::to_string(lineno));
      }
    }
    if (store.entries_.empty()) {
      store.l_ = l;
      store.d_ = d;
    } else if (l != store.l_ || d != store.d_) {
      throw DataError("feature store (L, D) not uniform: key " + key + " has (" +
                      std::to_string(l) + ", " + std::to_string(d) +
                      "), dataset has (" + std::to_string(store.l_) + ", " +
                      std::to_string(store.d_) + ")");
    }
    ImageAnnotations feats = load_features(dir / (key + ".mnt"));
    if (feats.positions() != l || feats.depth() != d) {
      throw DataError("feature file shape disagrees with manifest for key " + key);
    }
    if (normalize_rows) feats = normalize_features(feats);
    store.entries_.emplace(key, std::move(feats));
  }
  if (store.entries_.empty()) {
    throw DataError("feature store is empty: " + dir.string());
  }
  return store;
}

const ImageAnnotations& FeatureStore::get(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    throw DataError("image key not in feature store: " + key);
  }
  return it->second;
}

bool FeatureStore::contains(const std::string& key) const {
  return entries_.count(key) != 0;
}

void write_feature_store(const std::filesystem::path& dir,
                         const std::vector<std::pair<std::string, Tensor>>& items) {
  std::filesystem::create_directories(dir);
  std::ofstream manifest(dir / "manifest.txt", std::ios::binary);
  if (!manifest) throw IoError("cannot write manifest in " + dir.string());
  for (const auto& [key, tensor] : items) {
    save_tensor(dir / (key + ".mnt"), tensor);
    const std::size_t l = tensor.rank() == 3 ? tensor.dim(0) * tensor.dim(1)
                                             : tensor.dim(0);
    const std::size_t d = tensor.rank() == 3 ? tensor.dim(2) : tensor.dim(1);
    manifest << key << ' ' << l << ' ' << d << '\n';
  }
}

}  // namespace mnmt
