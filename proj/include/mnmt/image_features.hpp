#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "mnmt/rng.hpp"
#include "mnmt/tensor.hpp"

namespace mnmt {

// Spatial image annotation set: one feature row per image region.
struct ImageAnnotations {
  Tensor annotations;  // [L × D]
  bool normalized = false;

  std::size_t positions() const { return annotations.rows(); }
  std::size_t depth() const { return annotations.cols(); }
};

// Reads a tensor container of rank 3 (H, W, D), flattened row-major to
// [H·W × D], or rank 2 (L, D) taken as-is. Non-finite values are rejected.
ImageAnnotations load_features(const std::filesystem::path& path);

enum class NormGranularity { row, tensor };

// ℓ2-normalizes each spatial row independently (zero rows stay zero), or the
// whole tensor when granularity=tensor. Input must not be normalized yet.
ImageAnnotations normalize_features(const ImageAnnotations& feats,
                                    NormGranularity granularity = NormGranularity::row);

enum class FeatureStyle { dense, sparse };

// Deterministic pseudorandom features for tests and toy pipelines; `sparse`
// zeroes 90% of the entries.
ImageAnnotations synth_features(std::uint64_t seed, std::size_t l, std::size_t d,
                                FeatureStyle style);

// Directory of one container per image, "<key>.mnt", plus a manifest listing
// "key L D" per line. All entries must share (L, D); everything is loaded
// eagerly at open, after which lookups are concurrent-safe.
class FeatureStore {
 public:
  static FeatureStore open(const std::filesystem::path& dir, bool normalize_rows);

  const ImageAnnotations& get(const std::string& key) const;
  bool contains(const std::string& key) const;
  std::size_t positions() const { return l_; }
  std::size_t depth() const { return d_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::size_t l_ = 0, d_ = 0;
  std::unordered_map<std::string, ImageAnnotations> entries_;
};

// Writes "<key>.mnt" files plus the manifest; test/toy harness helper.
void write_feature_store(const std::filesystem::path& dir,
                         const std::vector<std::pair<std::string, Tensor>>& items);

}  // namespace mnmt
