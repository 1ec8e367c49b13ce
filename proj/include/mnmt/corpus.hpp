#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mnmt/text.hpp"

namespace mnmt {

struct Triple {
  std::vector<int> src;  // ends with EOS
  std::vector<int> tgt;  // ends with EOS
  std::string key;       // image feature reference
};

enum class Split { train, dev, test };

struct ParallelCorpus {
  std::vector<Triple> triples;
  Split tag = Split::train;
};

// Reads a UTF-8 file, one entry per line (trailing \r stripped).
std::vector<std::string> read_lines(const std::filesystem::path& path);

// Tokenizes, optionally BPE-segments, and encodes three line-aligned files
// into id triples. Line counts must agree; empty sentences are rejected.
ParallelCorpus encode_corpus(const std::vector<std::string>& src_lines,
                             const std::vector<std::string>& tgt_lines,
                             const std::vector<std::string>& key_lines,
                             const Vocabulary& src_vocab,
                             const Vocabulary& tgt_vocab,
                             const BpeMerges& merges, bool bpe_source,
                             Split tag);

// Encoded corpus file: one line per triple, "key \t src ids \t tgt ids".
void save_corpus(const std::filesystem::path& path, const ParallelCorpus& corpus);
ParallelCorpus load_corpus(const std::filesystem::path& path, Split tag);

}  // namespace mnmt
