#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mnmt/registry.hpp"
#include "mnmt/tensor.hpp"
#include "mnmt/text.hpp"

namespace mnmt {

enum class EmbeddingSource { along, glove, multimodal };

struct EmbeddingMatrix {
  Tensor matrix;  // [vocab_size × d_emb]
  bool trainable = true;
  EmbeddingSource source = EmbeddingSource::along;
};

struct LoadVectorsResult {
  EmbeddingMatrix embedding;
  std::size_t coverage = 0;  // non-special vocab words found in the file
};

// Word-vector text file: "word v1 v2 ... v_d" per line. Rows for in-vocab
// words are copied from the file; everything else (specials included) is
// Gaussian(0, 0.01).
LoadVectorsResult load_pretrained_vectors(const std::filesystem::path& path,
                                          const Vocabulary& vocab,
                                          std::size_t dim, Rng& rng);

// Raw file load; expected_dim 0 infers the dimension from the first line.
std::unordered_map<std::string, std::vector<double>> load_word_vector_file(
    const std::filesystem::path& path, std::size_t expected_dim);

// Element-wise mean of equally sized vectors.
Tensor average_visual(const std::vector<Tensor>& feature_vectors);

// One (word, linguistic vector, visual vector) training example for the
// language-to-vision mapper.
struct WordPair {
  std::string word;
  Tensor linguistic;  // [d_l]
  Tensor visual;      // [d_v]
};

// Pair file: "word" + d_l floats + "|" + d_v floats per line.
std::vector<WordPair> load_word_pairs(const std::filesystem::path& path,
                                      std::size_t d_l, std::size_t d_v);

struct MapperConfig {
  std::size_t d_l = 300;
  std::size_t d_v = 128;
  std::size_t hidden = 0;  // 0 = single affine layer
  double lr = 0.1;
  double dropout = 0.1;  // applied to the input vector during training
  int epochs = 175;
  std::uint64_t seed = 1;
};

// Language-to-vision map f: R^d_l -> R^d_v. With hidden == 0 this is the
// affine form f(l) = W·l + b.
struct VisualMapper {
  std::size_t d_l = 300;
  std::size_t d_v = 128;
  std::size_t hidden = 0;
  Tensor weight;   // [d_v × d_l], or [hidden × d_l] with a hidden layer
  Tensor bias;     // [d_v] or [hidden]
  Tensor weight2;  // [d_v × hidden] when hidden > 0
  Tensor bias2;    // [d_v] when hidden > 0
};

Tensor imagine(const VisualMapper& mapper, const Tensor& linguistic);
void imagine_span(const VisualMapper& mapper, const double* l, double* out);

struct MapperTrainResult {
  VisualMapper mapper;
  std::vector<double> epoch_mse;  // evaluated without dropout after each epoch
};

// SGD on the per-pair loss ‖f(l) − v‖²/d_v with inverted input dropout.
MapperTrainResult train_mapper(const std::vector<WordPair>& pairs,
                               const MapperConfig& config);

// Internals shared between training and the gradient-check tests: a mapper
// parameter registry and the mean loss over pairs with caller-fixed masks.
ParamRegistry build_mapper_registry(const MapperConfig& config, Rng& rng);
VisualMapper mapper_from_registry(const ParamRegistry& reg, const MapperConfig& config);
double mapper_batch_mse(ParamRegistry& reg, const MapperConfig& config,
                        std::span<const WordPair> pairs,
                        const std::vector<Tensor>* input_masks, bool with_grad);

// concat(l_w, l2_normalize(imagined)); dims pinned to 300 + 128 = 428.
Tensor multimodal_embed(const Tensor& linguistic, const Tensor& imagined);

struct MultimodalBuild {
  Tensor matrix;  // [vocab × 428]
  std::size_t covered = 0;
};

// One multimodal row per vocabulary entry; words missing from the vector map
// get a Gaussian(0, 0.01) linguistic part before imagination.
MultimodalBuild build_multimodal_matrix(
    const Vocabulary& vocab,
    const std::unordered_map<std::string, std::vector<double>>& vectors,
    const VisualMapper& mapper, Rng& rng);

// Mapper checkpoint: concatenated tensor records (weight, bias) or
// (weight, bias, weight2, bias2) for the hidden variant.
void save_mapper(const std::filesystem::path& path, const VisualMapper& mapper);
VisualMapper load_mapper(const std::filesystem::path& path);

}  // namespace mnmt
