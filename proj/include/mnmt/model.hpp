#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mnmt/registry.hpp"
#include "mnmt/tensor.hpp"

namespace mnmt {

struct ModelDims {
  std::size_t src_vocab = 0;
  std::size_t tgt_vocab = 0;
  std::size_t emb_src = 428;
  std::size_t emb_tgt = 428;
  std::size_t enc_hidden = 1024;  // per direction
  std::size_t dec_hidden = 1024;  // s_dim
  std::size_t att_dim = 0;        // 0 -> dec_hidden
  std::size_t out_dim = 0;        // 0 -> emb_tgt
  std::size_t init_hidden = 0;    // 0 -> dec_hidden
  std::size_t img_l = 196;
  std::size_t img_d = 1024;
  bool multimodal = true;

  std::size_t ctx_dim() const { return 2 * enc_hidden; }
  std::size_t att() const { return att_dim ? att_dim : dec_hidden; }
  std::size_t out() const { return out_dim ? out_dim : emb_tgt; }
  std::size_t init_hid() const { return init_hidden ? init_hidden : dec_hidden; }
};

// One GRU parameter set: stacked input blocks [3H × in] in (update, reset,
// candidate) order, stacked recurrent blocks [3H × H], stacked bias [3H].
struct GruRefs {
  Param* w = nullptr;
  Param* u = nullptr;
  Param* b = nullptr;
  std::size_t in = 0;
  std::size_t hidden = 0;
};

struct AttRefs {
  Param* ua = nullptr;  // [att × s_dim]
  Param* wa = nullptr;  // [att × a_dim]
  Param* v = nullptr;   // [att]
  std::size_t att = 0;
  std::size_t s_dim = 0;
  std::size_t a_dim = 0;
};

// The full doubly-attentive translation model. Parameters live in `reg`;
// the named pointers are stable views for the forward/backward passes.
// When dims.multimodal is false no image-pathway parameter exists at all.
struct Model {
  ModelDims dims;
  ParamRegistry reg;

  Param* emb_src = nullptr;  // E_X  [src_vocab × emb_src]
  Param* emb_tgt = nullptr;  // E_Y  [tgt_vocab × emb_tgt]

  GruRefs enc_fwd, enc_bwd, rec1;
  AttRefs att_txt, att_img;

  // f_init: two tanh layers from the final annotation to s_0
  Param* init_w1 = nullptr;
  Param* init_b1 = nullptr;
  Param* init_w2 = nullptr;
  Param* init_b2 = nullptr;

  // REC2: text context, image context and recurrent blocks
  Param* rec2_wz_c = nullptr;
  Param* rec2_wr_c = nullptr;
  Param* rec2_w_c = nullptr;
  Param* rec2_wz_i = nullptr;
  Param* rec2_wr_i = nullptr;
  Param* rec2_w_i = nullptr;
  Param* rec2_uz = nullptr;
  Param* rec2_ur = nullptr;
  Param* rec2_u = nullptr;

  // image-context gating scalar
  Param* gate_w = nullptr;
  Param* gate_b = nullptr;

  // deep output
  Param* out_lo = nullptr;
  Param* out_ls = nullptr;
  Param* out_lc = nullptr;
  Param* out_li = nullptr;
  Param* out_lw = nullptr;
};

// Builds and initializes all parameters: Gaussian(0, 0.01) non-recurrent
// blocks, per-block orthogonal recurrent matrices, zero biases.
Model build_model(const ModelDims& dims, Rng& rng);

// Replaces the source embedding matrix (pretrained modes). frozen=true
// excludes it from optimization.
void set_source_embeddings(Model& model, Tensor matrix, bool frozen);

struct CheckpointMeta {
  std::string config_text;  // resolved key=value snapshot
  std::uint64_t src_vocab_hash = 0;
  std::uint64_t tgt_vocab_hash = 0;
  std::size_t epoch = 0;
  double dev_bleu = 0.0;
};

// Checkpoint directory: model.mnt (records in registry order) + manifest.txt
// (meta plus ordered "param <name>" lines).
void save_checkpoint(const std::filesystem::path& dir, const Model& model,
                     const CheckpointMeta& meta);

struct LoadedCheckpoint {
  Model model;
  CheckpointMeta meta;
};

LoadedCheckpoint load_checkpoint(const std::filesystem::path& dir);

}  // namespace mnmt
