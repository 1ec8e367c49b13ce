#include "mnmt/model.hpp"

#include <fstream>
#include <sstream>

#include "mnmt/errors.hpp"
#include "mnmt/serialize.hpp"

namespace mnmt {

namespace {

GruRefs add_gru(ParamRegistry& reg, const std::string& prefix, std::size_t in,
                std::size_t hidden, Rng& rng) {
  GruRefs refs;
  refs.in = in;
  refs.hidden = hidden;
  refs.w = &reg.add(prefix + ".W", {3 * hidden, in}, InitScheme::gaussian, rng);
  refs.u = &reg.add(prefix + ".U", {3 * hidden, hidden}, InitScheme::orthogonal, rng);
  refs.b = &reg.add(prefix + ".b", {3 * hidden}, InitScheme::zero, rng);
  return refs;
}

AttRefs add_attention(ParamRegistry& reg, const std::string& prefix,
                      std::size_t att, std::size_t s_dim, std::size_t a_dim,
                      Rng& rng) {
  AttRefs refs;
  refs.att = att;
  refs.s_dim = s_dim;
  refs.a_dim = a_dim;
  refs.ua = &reg.add(prefix + ".U_a", {att, s_dim}, InitScheme::gaussian, rng);
  refs.wa = &reg.add(prefix + ".W_a", {att, a_dim}, InitScheme::gaussian, rng);
  refs.v = &reg.add(prefix + ".v", {att}, InitScheme::gaussian, rng);
  return refs;
}

void check_dims(const ModelDims& d) {
  if (d.src_vocab < Vocabulary_kMinSize() || d.tgt_vocab < Vocabulary_kMinSize()) {
    throw std::invalid_argument("model needs vocabularies with specials present");
  }
}

constexpr std::size_t Vocabulary_kMinSize_v = 4;

}  // namespace

// Out-of-line so check_dims above can stay near its use.
static std::size_t Vocabulary_kMinSize_impl() { return Vocabulary_kMinSize_v; }
std::size_t Vocabulary_kMinSize();

Model build_model(const ModelDims& dims, Rng& rng) {
  Model m;
  m.dims = dims;
  ParamRegistry& reg = m.reg;
  const std::size_t ctx = dims.ctx_dim();
  const std::size_t s = dims.dec_hidden;
  const std::size_t att = dims.att();
  const std::size_t out = dims.out();
  const std::size_t ih = dims.init_hid();

  // Text pathway first: a text-only build with the same seed draws identical
  // values for every shared parameter (image parameters are appended last).
  m.emb_src = &reg.add("emb.src", {dims.src_vocab, dims.emb_src},
                       InitScheme::gaussian, rng);
  m.emb_tgt = &reg.add("emb.tgt", {dims.tgt_vocab, dims.emb_tgt},
                       InitScheme::gaussian, rng);
  m.enc_fwd = add_gru(reg, "enc.fwd", dims.emb_src, dims.enc_hidden, rng);
  m.enc_bwd = add_gru(reg, "enc.bwd", dims.emb_src, dims.enc_hidden, rng);
  m.init_w1 = &reg.add("dec.init.W1", {ih, ctx}, InitScheme::gaussian, rng);
  m.init_b1 = &reg.add("dec.init.b1", {ih}, InitScheme::zero, rng);
  m.init_w2 = &reg.add("dec.init.W2", {s, ih}, InitScheme::gaussian, rng);
  m.init_b2 = &reg.add("dec.init.b2", {s}, InitScheme::zero, rng);
  m.rec1 = add_gru(reg, "dec.rec1", dims.emb_tgt, s, rng);
  m.att_txt = add_attention(reg, "att.txt", att, s, ctx, rng);
  m.rec2_wz_c = &reg.add("dec.rec2.Wz_c", {s, ctx}, InitScheme::gaussian, rng);
  m.rec2_wr_c = &reg.add("dec.rec2.Wr_c", {s, ctx}, InitScheme::gaussian, rng);
  m.rec2_w_c = &reg.add("dec.rec2.W_c", {s, ctx}, InitScheme::gaussian, rng);
  m.rec2_uz = &reg.add("dec.rec2.Uz", {s, s}, InitScheme::orthogonal, rng);
  m.rec2_ur = &reg.add("dec.rec2.Ur", {s, s}, InitScheme::orthogonal, rng);
  m.rec2_u = &reg.add("dec.rec2.U", {s, s}, InitScheme::orthogonal, rng);
  m.out_ls = &reg.add("dec.out.L_s", {out, s}, InitScheme::gaussian, rng);
  m.out_lc = &reg.add("dec.out.L_c", {out, ctx}, InitScheme::gaussian, rng);
  m.out_lw = &reg.add("dec.out.L_w", {out, dims.emb_tgt}, InitScheme::gaussian, rng);
  m.out_lo = &reg.add("dec.out.L_o", {dims.tgt_vocab, out}, InitScheme::gaussian, rng);

  if (dims.multimodal) {
    const std::size_t i_dim = dims.img_d;
    m.att_img = add_attention(reg, "att.img", att, s, i_dim, rng);
    m.rec2_wz_i = &reg.add("dec.rec2.Wz_i", {s, i_dim}, InitScheme::gaussian, rng);
    m.rec2_wr_i = &reg.add("dec.rec2.Wr_i", {s, i_dim}, InitScheme::gaussian, rng);
    m.rec2_w_i = &reg.add("dec.rec2.W_i", {s, i_dim}, InitScheme::gaussian, rng);
    m.gate_w = &reg.add("dec.gate.w", {s}, InitScheme::gaussian, rng);
    m.gate_b = &reg.add("dec.gate.b", {1}, InitScheme::zero, rng);
    m.out_li = &reg.add("dec.out.L_i", {out, i_dim}, InitScheme::gaussian, rng);
  }
  return m;
}

void set_source_embeddings(Model& model, Tensor matrix, bool frozen) {
  Param& p = *model.emb_src;
  if (!p.value.same_shape(matrix)) {
    throw ConfigError("embedding matrix shape does not match model dims");
  }
  p.value = std::move(matrix);
  p.trainable = !frozen;
}

namespace {

void put_kv(std::ostream& out, const std::string& key, const std::string& value) {
  out << key << " = " << value << '\n';
}

}  // namespace

void save_checkpoint(const std::filesystem::path& dir, const Model& model,
                     const CheckpointMeta& meta) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream manifest(dir / "manifest.txt", std::ios::binary);
    if (!manifest) throw IoError("cannot write checkpoint manifest in " + dir.string());
    manifest << "mnmt-checkpoint 1\n";
    put_kv(manifest, "epoch", std::to_string(meta.epoch));
    {
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.6f", meta.dev_bleu);
      put_kv(manifest, "dev_bleu", buf);
    }
    put_kv(manifest, "src_vocab_hash", std::to_string(meta.src_vocab_hash));
    put_kv(manifest, "tgt_vocab_hash", std::to_string(meta.tgt_vocab_hash));
    const ModelDims& d = model.dims;
    put_kv(manifest, "dims.src_vocab", std::to_string(d.src_vocab));
    put_kv(manifest, "dims.tgt_vocab", std::to_string(d.tgt_vocab));
    put_kv(manifest, "dims.emb_src", std::to_string(d.emb_src));
    put_kv(manifest, "dims.emb_tgt", std::to_string(d.emb_tgt));
    put_kv(manifest, "dims.enc_hidden", std::to_string(d.enc_hidden));
    put_kv(manifest, "dims.dec_hidden", std::to_string(d.dec_hidden));
    put_kv(manifest, "dims.att_dim", std::to_string(d.att_dim));
    put_kv(manifest, "dims.out_dim", std::to_string(d.out_dim));
    put_kv(manifest, "dims.init_hidden", std::to_string(d.init_hidden));
    put_kv(manifest, "dims.img_l", std::to_string(d.img_l));
    put_kv(manifest, "dims.img_d", std::to_string(d.img_d));
    put_kv(manifest, "dims.multimodal", d.multimodal ? "1" : "0");
    manifest << "config_begin\n" << meta.config_text;
    if (!meta.config_text.empty() && meta.config_text.back() != '\n') manifest << '\n';
    manifest << "config_end\n";
    for (const auto& p : model.reg.entries()) {
      if (!p->trainable) manifest << "frozen " << p->name << '\n';
    }
    for (const auto& p : model.reg.entries()) {
      manifest << "param " << p->name << '\n';
    }
    if (!manifest) throw IoError("write failed: " + (dir / "manifest.txt").string());
  }
  std::vector<const Tensor*> records;
  records.reserve(model.reg.count());
  for (const auto& p : model.reg.entries()) records.push_back(&p->value);
  save_tensors(dir / "model.mnt", records);
}

LoadedCheckpoint load_checkpoint(const std::filesystem::path& dir) {
  const auto manifest_path = dir / "manifest.txt";
  std::ifstream manifest(manifest_path, std::ios::binary);
  if (!manifest) throw IoError("cannot open checkpoint manifest: " + manifest_path.string());
  std::string line;
  if (!std::getline(manifest, line) || line != "mnmt-checkpoint 1") {
    throw InvalidFormat("bad checkpoint manifest header: " + manifest_path.string());
  }

  CheckpointMeta meta;
  ModelDims dims;
  std::vector<std::string> param_order;
  std::vector<std::string> frozen;
  bool in_config = false;
  while (std::getline(manifest, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (in_config) {
      if (line == "config_end") {
        in_config = false;
      } else {
        meta.config_text += line;
        meta.config_text += '\n';
      }
      continue;
    }
    if (line == "config_begin") {
      in_config = true;
      continue;
    }
    if (line.rfind("param ", 0) == 0) {
      param_order.push_back(line.substr(6));
      continue;
    }
    if (line.rfind("frozen ", 0) == 0) {
      frozen.push_back(line.substr(7));
      continue;
    }
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 3);
    if (key == "epoch") meta.epoch = std::stoul(value);
    else if (key == "dev_bleu") meta.dev_bleu = std::stod(value);
    else if (key == "src_vocab_hash") meta.src_vocab_hash = std::stoull(value);
    else if (key == "tgt_vocab_hash") meta.tgt_vocab_hash = std::stoull(value);
    else if (key == "dims.src_vocab") dims.src_vocab = std::stoul(value);
    else if (key == "dims.tgt_vocab") dims.tgt_vocab = std::stoul(value);
    else if (key == "dims.emb_src") dims.emb_src = std::stoul(value);
    else if (key == "dims.emb_tgt") dims.emb_tgt = std::stoul(value);
    else if (key == "dims.enc_hidden") dims.enc_hidden = std::stoul(value);
    else if (key == "dims.dec_hidden") dims.dec_hidden = std::stoul(value);
    else if (key == "dims.att_dim") dims.att_dim = std::stoul(value);
    else if (key == "dims.out_dim") dims.out_dim = std::stoul(value);
    else if (key == "dims.init_hidden") dims.init_hidden = std::stoul(value);
    else if (key == "dims.img_l") dims.img_l = std::stoul(value);
    else if (key == "dims.img_d") dims.img_d = std::stoul(value);
    else if (key == "dims.multimodal") dims.multimodal = value == "1";
  }

  // Build the structure, then overwrite every value from the records.
  Rng scratch(0);
  LoadedCheckpoint out{build_model(dims, scratch), std::move(meta)};
  auto records = load_tensors(dir / "model.mnt");
  if (records.size() != param_order.size() ||
      records.size() != out.model.reg.count()) {
    throw InvalidFormat("checkpoint record count does not match manifest");
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    Param& p = out.model.reg.get(param_order[i]);
    if (!p.value.same_shape(records[i])) {
      throw InvalidFormat("checkpoint shape mismatch for " + param_order[i]);
    }
    p.value = std::move(records[i]);
  }
  for (const auto& name : frozen) out.model.reg.get(name).trainable = false;
  return out;
}

}  // namespace mnmt
