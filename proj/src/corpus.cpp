#include "mnmt/corpus.hpp"

#include <fstream>
#include <sstream>

#include "mnmt/errors.hpp"

namespace mnmt {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

ParallelCorpus encode_corpus(const std::vector<std::string>& src_lines,
                             const std::vector<std::string>& tgt_lines,
                             const std::vector<std::string>& key_lines,
                             const Vocabulary& src_vocab,
                             const Vocabulary& tgt_vocab,
                             const BpeMerges& merges, bool bpe_source,
                             Split tag) {
  if (src_lines.size() != tgt_lines.size() || src_lines.size() != key_lines.size()) {
    throw DataError("misaligned corpus files: source " +
                    std::to_string(src_lines.size()) + " lines, target " +
                    std::to_string(tgt_lines.size()) + " lines, keys " +
                    std::to_string(key_lines.size()) + " lines");
  }
  ParallelCorpus corpus;
  corpus.tag = tag;
  corpus.triples.reserve(src_lines.size());
  for (std::size_t i = 0; i < src_lines.size(); ++i) {
    auto src_toks = tokenize(src_lines[i]);
    auto tgt_toks = tokenize(tgt_lines[i]);
    if (src_toks.empty() || tgt_toks.empty()) {
      throw DataError("empty sentence at line " + std::to_string(i + 1));
    }
    if (bpe_source) src_toks = bpe_segment_sentence(src_toks, merges);
    tgt_toks = bpe_segment_sentence(tgt_toks, merges);
    std::string key = key_lines[i];
    if (key.empty()) throw DataError("empty image key at line " + std::to_string(i + 1));
    corpus.triples.push_back({src_vocab.encode(src_toks), tgt_vocab.encode(tgt_toks),
                              std::move(key)});
  }
  return corpus;
}

void save_corpus(const std::filesystem::path& path, const ParallelCorpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  for (const auto& t : corpus.triples) {
    out << t.key << '\t';
    for (std::size_t i = 0; i < t.src.size(); ++i) {
      if (i) out << ' ';
      out << t.src[i];
    }
    out << '\t';
    for (std::size_t i = 0; i < t.tgt.size(); ++i) {
      if (i) out << ' ';
      out << t.tgt[i];
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

ParallelCorpus load_corpus(const std::filesystem::path& path, Split tag) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  ParallelCorpus corpus;
  corpus.tag = tag;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string::npos ? std::string::npos
                                                : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos) {
      throw InvalidFormat("bad corpus line at " + path.string() + ":" +
                          std::to_string(lineno));
    }
    Triple t;
    t.key = line.substr(0, tab1);
    auto parse_ids = [&](std::string_view field) {
      std::vector<int> ids;
      std::istringstream ss{std::string(field)};
      int v = 0;
      while (ss >> v) ids.push_back(v);
      if (ids.empty()) {
        throw InvalidFormat("empty id sequence at " + path.string() + ":" +
                            std::to_string(lineno));
      }
      return ids;
    };
    t.src = parse_ids(std::string_view(line).substr(tab1 + 1, tab2 - tab1 - 1));
    t.tgt = parse_ids(std::string_view(line).substr(tab2 + 1));
    corpus.triples.push_back(std::move(t));
  }
  return corpus;
}

}  // namespace mnmt
