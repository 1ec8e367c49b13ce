#include "mnmt/embeddings.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "mnmt/errors.hpp"
#include "mnmt/kernels.hpp"
#include "mnmt/ops.hpp"
#include "mnmt/serialize.hpp"

namespace mnmt {

namespace {

std::vector<double> parse_floats(std::istringstream& ss, std::size_t count,
                                 const std::string& where) {
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    double v = 0.0;
    if (!(ss >> v)) throw InvalidFormat("expected " + std::to_string(count) +
                                        " floats at " + where);
    out.push_back(v);
  }
  return out;
}

}  // namespace

std::unordered_map<std::string, std::vector<double>> load_word_vector_file(
    const std::filesystem::path& path, std::size_t expected_dim) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  std::unordered_map<std::string, std::vector<double>> map;
  std::string line;
  std::size_t lineno = 0;
  std::size_t dim = expected_dim;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string word;
    if (!(ss >> word)) {
      throw InvalidFormat("bad vector line at " + path.string() + ":" +
                          std::to_string(lineno));
    }
    std::vector<double> values;
    double v = 0.0;
    while (ss >> v) values.push_back(v);
    if (!ss.eof()) {
      throw InvalidFormat("non-numeric vector entry at " + path.string() + ":" +
                          std::to_string(lineno));
    }
    if (values.empty()) {
      throw InvalidFormat("vector line without values at " + path.string() + ":" +
                          std::to_string(lineno));
    }
    if (dim == 0) dim = values.size();
    if (values.size() != dim) {
      throw InvalidFormat("vector dimension mismatch at " + path.string() + ":" +
                          std::to_string(lineno) + " (got " +
                          std::to_string(values.size()) + ", expected " +
                          std::to_string(dim) + ")");
    }
    map[word] = std::move(values);
  }
  return map;
}

LoadVectorsResult load_pretrained_vectors(const std::filesystem::path& path,
                                          const Vocabulary& vocab,
                                          std::size_t dim, Rng& rng) {
  auto vectors = load_word_vector_file(path, dim);
  LoadVectorsResult result;
  result.embedding.source = EmbeddingSource::glove;
  result.embedding.matrix = Tensor({vocab.size(), dim});
  Tensor& m = result.embedding.matrix;
  for (std::size_t id = 0; id < vocab.size(); ++id) {
    const std::string& tok = vocab.token(static_cast<int>(id));
    auto it = id < Vocabulary::kNumSpecials ? vectors.end() : vectors.find(tok);
    if (it != vectors.end()) {
      std::copy(it->second.begin(), it->second.end(), m.row(id));
      ++result.coverage;
    } else {
      for (std::size_t c = 0; c < dim; ++c) m.at(id, c) = rng.gaussian(0.01);
    }
  }
  return result;
}

Tensor average_visual(const std::vector<Tensor>& feature_vectors) {
  if (feature_vectors.empty()) {
    throw std::invalid_argument("average_visual: empty feature list");
  }
  const std::size_t d = feature_vectors.front().size();
  Tensor mean({d});
  for (const Tensor& v : feature_vectors) {
    if (v.size() != d) {
      throw std::invalid_argument("average_visual: dimension mismatch");
    }
    kernels::active().axpy(1.0, v.data(), mean.data(), d);
  }
  kernels::active().scal(1.0 / static_cast<double>(feature_vectors.size()),
                         mean.data(), d);
  return mean;
}

std::vector<WordPair> load_word_pairs(const std::filesystem::path& path,
                                      std::size_t d_l, std::size_t d_v) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  std::vector<WordPair> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    std::istringstream ss(line);
    WordPair pair;
    if (!(ss >> pair.word)) throw InvalidFormat("bad pair line at " + where);
    pair.linguistic = Tensor::vector(parse_floats(ss, d_l, where));
    std::string sep;
    if (!(ss >> sep) || sep != "|") {
      throw InvalidFormat("expected '|' separator at " + where);
    }
    pair.visual = Tensor::vector(parse_floats(ss, d_v, where));
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

// ---------------------------------------------------------------------------
// Language-to-vision mapper

ParamRegistry build_mapper_registry(const MapperConfig& config, Rng& rng) {
  ParamRegistry reg;
  if (config.hidden == 0) {
    reg.add("mapper.weight", {config.d_v, config.d_l}, InitScheme::gaussian, rng);
    reg.add("mapper.bias", {config.d_v}, InitScheme::zero, rng);
  } else {
    reg.add("mapper.weight", {config.hidden, config.d_l}, InitScheme::gaussian, rng);
    reg.add("mapper.bias", {config.hidden}, InitScheme::zero, rng);
    reg.add("mapper.weight2", {config.d_v, config.hidden}, InitScheme::gaussian, rng);
    reg.add("mapper.bias2", {config.d_v}, InitScheme::zero, rng);
  }
  return reg;
}

VisualMapper mapper_from_registry(const ParamRegistry& reg, const MapperConfig& config) {
  VisualMapper m;
  m.d_l = config.d_l;
  m.d_v = config.d_v;
  m.hidden = config.hidden;
  m.weight = reg.get("mapper.weight").value;
  m.bias = reg.get("mapper.bias").value;
  if (config.hidden > 0) {
    m.weight2 = reg.get("mapper.weight2").value;
    m.bias2 = reg.get("mapper.bias2").value;
  }
  return m;
}

double mapper_batch_mse(ParamRegistry& reg, const MapperConfig& config,
                        std::span<const WordPair> pairs,
                        const std::vector<Tensor>* input_masks, bool with_grad) {
  if (pairs.empty()) throw std::invalid_argument("mapper loss needs >= 1 pair");
  const auto& k = kernels::active();
  Param& weight = reg.get("mapper.weight");
  Param& bias = reg.get("mapper.bias");
  Param* weight2 = config.hidden > 0 ? &reg.get("mapper.weight2") : nullptr;
  Param* bias2 = config.hidden > 0 ? &reg.get("mapper.bias2") : nullptr;

  const double inv_dv = 1.0 / static_cast<double>(config.d_v);
  const double inv_n = 1.0 / static_cast<double>(pairs.size());
  double total = 0.0;
  std::vector<double> x(config.d_l), pred(config.d_v), err(config.d_v);
  std::vector<double> hpre(config.hidden), h(config.hidden), dh(config.hidden);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const WordPair& pair = pairs[p];
    if (pair.linguistic.size() != config.d_l || pair.visual.size() != config.d_v) {
      throw std::invalid_argument("word pair dimensions do not match mapper config");
    }
    if (input_masks) {
      k.vmul((*input_masks)[p].data(), pair.linguistic.data(), x.data(), config.d_l);
    } else {
      std::copy_n(pair.linguistic.data(), config.d_l, x.data());
    }
    if (config.hidden == 0) {
      k.matvec(weight.value.data(), x.data(), pred.data(), config.d_v, config.d_l);
      k.vadd(pred.data(), bias.value.data(), pred.data(), config.d_v);
    } else {
      k.matvec(weight.value.data(), x.data(), hpre.data(), config.hidden, config.d_l);
      k.vadd(hpre.data(), bias.value.data(), hpre.data(), config.hidden);
      tanh_span(hpre.data(), h.data(), config.hidden);
      k.matvec(weight2->value.data(), h.data(), pred.data(), config.d_v, config.hidden);
      k.vadd(pred.data(), bias2->value.data(), pred.data(), config.d_v);
    }
    for (std::size_t i = 0; i < config.d_v; ++i) err[i] = pred[i] - pair.visual[i];
    total += k.nrm2sq(err.data(), config.d_v) * inv_dv;

    if (with_grad) {
      // d loss / d pred = 2 err / (d_v * n)
      k.scal(2.0 * inv_dv * inv_n, err.data(), config.d_v);
      if (config.hidden == 0) {
        k.ger(err.data(), x.data(), weight.grad.data(), config.d_v, config.d_l);
        k.vadd(err.data(), bias.grad.data(), bias.grad.data(), config.d_v);
      } else {
        k.ger(err.data(), h.data(), weight2->grad.data(), config.d_v, config.hidden);
        k.vadd(err.data(), bias2->grad.data(), bias2->grad.data(), config.d_v);
        std::fill(dh.begin(), dh.end(), 0.0);
        k.matvec_t_acc(weight2->value.data(), err.data(), dh.data(), config.d_v,
                       config.hidden);
        for (std::size_t i = 0; i < config.hidden; ++i) dh[i] *= 1.0 - h[i] * h[i];
        k.ger(dh.data(), x.data(), weight.grad.data(), config.hidden, config.d_l);
        k.vadd(dh.data(), bias.grad.data(), bias.grad.data(), config.hidden);
      }
    }
  }
  return total * inv_n;
}

MapperTrainResult train_mapper(const std::vector<WordPair>& pairs,
                               const MapperConfig& config) {
  if (pairs.empty()) throw std::invalid_argument("train_mapper: need >= 1 pair");
  if (config.epochs < 0) throw std::invalid_argument("train_mapper: epochs must be >= 0");
  Rng root(config.seed);
  Rng init_rng = root.fork("mapper.init");
  ParamRegistry reg = build_mapper_registry(config, init_rng);
  Rng drop_rng = root.fork("mapper.dropout");
  Rng shuffle_rng = root.fork("mapper.shuffle");

  MapperTrainResult result;
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<Tensor> mask(1);
  const double keep = 1.0 - config.dropout;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    // Fisher-Yates with our own rng; std::shuffle is not portable bit-for-bit.
    for (std::size_t i = order.size(); i > 1; --i) {
      const std::size_t j = shuffle_rng.next_u64() % i;
      std::swap(order[i - 1], order[j]);
    }
    for (std::size_t idx : order) {
      reg.zero_grads();
      const std::vector<Tensor>* masks = nullptr;
      if (config.dropout > 0.0) {
        mask[0] = Tensor({config.d_l});
        for (double& v : mask[0].values()) {
          v = drop_rng.bernoulli(keep) ? 1.0 / keep : 0.0;
        }
        masks = &mask;
      }
      mapper_batch_mse(reg, config, std::span(&pairs[idx], 1), masks, true);
      for (const auto& p : reg.entries()) {
        kernels::active().axpy(-config.lr, p->grad.data(), p->value.data(),
                               p->value.size());
      }
    }
    result.epoch_mse.push_back(
        mapper_batch_mse(reg, config, pairs, nullptr, false));
  }
  result.mapper = mapper_from_registry(reg, config);
  return result;
}

void imagine_span(const VisualMapper& mapper, const double* l, double* out) {
  const auto& k = kernels::active();
  if (mapper.hidden == 0) {
    k.matvec(mapper.weight.data(), l, out, mapper.d_v, mapper.d_l);
    k.vadd(out, mapper.bias.data(), out, mapper.d_v);
  } else {
    std::vector<double> h(mapper.hidden);
    k.matvec(mapper.weight.data(), l, h.data(), mapper.hidden, mapper.d_l);
    k.vadd(h.data(), mapper.bias.data(), h.data(), mapper.hidden);
    tanh_span(h.data(), h.data(), mapper.hidden);
    k.matvec(mapper.weight2.data(), h.data(), out, mapper.d_v, mapper.hidden);
    k.vadd(out, mapper.bias2.data(), out, mapper.d_v);
  }
}

Tensor imagine(const VisualMapper& mapper, const Tensor& linguistic) {
  if (linguistic.size() != mapper.d_l) {
    throw std::invalid_argument("imagine: linguistic dimension mismatch");
  }
  Tensor out({mapper.d_v});
  imagine_span(mapper, linguistic.data(), out.data());
  return out;
}

Tensor multimodal_embed(const Tensor& linguistic, const Tensor& imagined) {
  if (linguistic.size() != 300 || imagined.size() != 128) {
    throw std::invalid_argument(
        "multimodal_embed: dims must be exactly 300 (linguistic) + 128 (imagined)");
  }
  Tensor out({428});
  std::copy_n(linguistic.data(), 300, out.data());
  l2_normalize_span(imagined.data(), out.data() + 300, 128);
  return out;
}

MultimodalBuild build_multimodal_matrix(
    const Vocabulary& vocab,
    const std::unordered_map<std::string, std::vector<double>>& vectors,
    const VisualMapper& mapper, Rng& rng) {
  if (mapper.d_l != 300 || mapper.d_v != 128) {
    throw std::invalid_argument(
        "multimodal embeddings need a 300->128 mapper");
  }
  MultimodalBuild result;
  result.matrix = Tensor({vocab.size(), 428});
  Tensor l({300});
  for (std::size_t id = 0; id < vocab.size(); ++id) {
    const std::string& tok = vocab.token(static_cast<int>(id));
    auto it = id < Vocabulary::kNumSpecials ? vectors.end() : vectors.find(tok);
    if (it != vectors.end()) {
      if (it->second.size() != 300) {
        throw InvalidFormat("multimodal build needs 300-dim vectors, got " +
                            std::to_string(it->second.size()) + " for '" + tok + "'");
      }
      std::copy(it->second.begin(), it->second.end(), l.data());
      ++result.covered;
    } else {
      for (double& v : l.values()) v = rng.gaussian(0.01);
    }
    Tensor row = multimodal_embed(l, imagine(mapper, l));
    std::copy_n(row.data(), 428, result.matrix.row(id));
  }
  return result;
}

void save_mapper(const std::filesystem::path& path, const VisualMapper& mapper) {
  std::vector<const Tensor*> records = {&mapper.weight, &mapper.bias};
  if (mapper.hidden > 0) {
    records.push_back(&mapper.weight2);
    records.push_back(&mapper.bias2);
  }
  save_tensors(path, records);
}

VisualMapper load_mapper(const std::filesystem::path& path) {
  auto records = load_tensors(path);
  VisualMapper m;
  if (records.size() == 2) {
    m.weight = std::move(records[0]);
    m.bias = std::move(records[1]);
    m.hidden = 0;
    m.d_v = m.weight.rows();
    m.d_l = m.weight.cols();
  } else if (records.size() == 4) {
    m.weight = std::move(records[0]);
    m.bias = std::move(records[1]);
    m.weight2 = std::move(records[2]);
    m.bias2 = std::move(records[3]);
    m.hidden = m.weight.rows();
    m.d_l = m.weight.cols();
    m.d_v = m.weight2.rows();
  } else {
    throw InvalidFormat("mapper checkpoint must hold 2 or 4 tensors: " +
                        path.string());
  }
  return m;
}

}  // namespace mnmt
