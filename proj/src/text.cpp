#include "mnmt/text.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "mnmt/errors.hpp"
#include "mnmt/rng.hpp"

namespace mnmt {

namespace {

constexpr std::string_view kEow = "</w>";
const char* kSpecialNames[4] = {"<pad>", "<s>", "</s>", "<unk>"};

bool is_ascii_space(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0 &&
         static_cast<unsigned char>(c) < 0x80;
}

bool is_ascii_punct(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0 &&
         static_cast<unsigned char>(c) < 0x80;
}

bool is_special_form(std::string_view tok) {
  for (const char* s : kSpecialNames) {
    if (tok == s) return true;
  }
  return false;
}

}  // namespace

std::vector<std::string> utf8_chars(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const unsigned char lead = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    if ((lead & 0x80) == 0x00) len = 1;
    else if ((lead & 0xe0) == 0xc0) len = 2;
    else if ((lead & 0xf0) == 0xe0) len = 3;
    else if ((lead & 0xf8) == 0xf0) len = 4;
    if (i + len > s.size()) len = 1;
    for (std::size_t k = 1; k < len; ++k) {
      if ((static_cast<unsigned char>(s[i + k]) & 0xc0) != 0x80) {
        len = 1;
        break;
      }
    }
    out.emplace_back(s.substr(i, len));
    i += len;
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_ascii_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_ascii_space(text[j])) ++j;
    if (j > i) {
      std::string_view chunk = text.substr(i, j - i);
      while (!chunk.empty() && is_ascii_punct(chunk.front())) {
        out.emplace_back(1, chunk.front());
        chunk.remove_prefix(1);
      }
      std::vector<char> trail;
      while (!chunk.empty() && is_ascii_punct(chunk.back())) {
        trail.push_back(chunk.back());
        chunk.remove_suffix(1);
      }
      if (!chunk.empty()) out.emplace_back(chunk);
      for (auto it = trail.rbegin(); it != trail.rend(); ++it) {
        out.emplace_back(1, *it);
      }
    }
    i = j;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Vocabulary

Vocabulary::Vocabulary() {
  for (const char* s : kSpecialNames) tokens_.emplace_back(s);
  rebuild_index();
}

void Vocabulary::add_token(std::string token) {
  tokens_.push_back(std::move(token));
}

void Vocabulary::rebuild_index() {
  index_.clear();
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    index_.emplace_back(tokens_[i], static_cast<int>(i));
  }
  std::sort(index_.begin(), index_.end());
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& corpus,
                             int min_count) {
  if (min_count < 1) throw std::invalid_argument("build_vocab: min_count must be >= 1");
  std::map<std::string, long> freq;
  for (const auto& sent : corpus) {
    for (const auto& tok : sent) ++freq[tok];
  }
  std::vector<std::pair<std::string, long>> items;
  for (auto& [tok, count] : freq) {
    if (count >= min_count) items.emplace_back(tok, count);
  }
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  Vocabulary v;
  for (auto& [tok, count] : items) v.add_token(tok);
  v.rebuild_index();
  return v;
}

int Vocabulary::id(std::string_view token) const {
  auto it = std::lower_bound(
      index_.begin(), index_.end(), token,
      [](const auto& entry, std::string_view key) { return entry.first < key; });
  if (it != index_.end() && it->first == token) return it->second;
  return kUnk;
}

bool Vocabulary::contains(std::string_view token) const {
  auto it = std::lower_bound(
      index_.begin(), index_.end(), token,
      [](const auto& entry, std::string_view key) { return entry.first < key; });
  return it != index_.end() && it->first == token;
}

const std::string& Vocabulary::token(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
    throw std::invalid_argument("token id out of range: " + std::to_string(id));
  }
  return tokens_[static_cast<std::size_t>(id)];
}

std::vector<int> Vocabulary::encode(const std::vector<std::string>& tokens) const {
  std::vector<int> ids;
  ids.reserve(tokens.size() + 1);
  for (const auto& tok : tokens) ids.push_back(id(tok));
  ids.push_back(kEos);
  return ids;
}

std::vector<std::string> Vocabulary::decode(std::span<const int> ids) const {
  std::vector<std::string> out;
  for (int i : ids) {
    if (i == kEos) break;
    out.push_back(token(i));
  }
  return out;
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  for (std::size_t i = kNumSpecials; i < tokens_.size(); ++i) {
    out << tokens_[i] << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  Vocabulary v;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    v.add_token(line);
  }
  v.rebuild_index();
  return v;
}

std::uint64_t Vocabulary::content_hash() const {
  std::string joined;
  for (const auto& tok : tokens_) {
    joined += tok;
    joined += '\n';
  }
  return fnv1a64(joined);
}

// ---------------------------------------------------------------------------
// Byte pair encoding

namespace {

using SymbolSeq = std::vector<std::string>;
using Pair = std::pair<std::string, std::string>;

SymbolSeq word_symbols(std::string_view word) {
  SymbolSeq sym = utf8_chars(word);
  if (!sym.empty()) sym.back() += kEow;
  return sym;
}

// Merges all left-to-right non-overlapping occurrences of `pair` in place.
void merge_pair(SymbolSeq& sym, const Pair& pair) {
  SymbolSeq out;
  out.reserve(sym.size());
  std::size_t i = 0;
  while (i < sym.size()) {
    if (i + 1 < sym.size() && sym[i] == pair.first && sym[i + 1] == pair.second) {
      out.push_back(sym[i] + sym[i + 1]);
      i += 2;
    } else {
      out.push_back(sym[i]);
      ++i;
    }
  }
  sym = std::move(out);
}

}  // namespace

BpeMerges bpe_learn(const std::vector<std::vector<std::string>>& corpus,
                    int num_merges) {
  if (num_merges < 0) throw std::invalid_argument("bpe_learn: num_merges must be >= 0");

  std::map<std::string, long> word_freq;
  for (const auto& sent : corpus) {
    for (const auto& tok : sent) ++word_freq[tok];
  }
  std::vector<std::pair<SymbolSeq, long>> words;
  words.reserve(word_freq.size());
  for (auto& [word, freq] : word_freq) {
    words.emplace_back(word_symbols(word), freq);
  }

  BpeMerges result;
  for (int m = 0; m < num_merges; ++m) {
    std::map<Pair, long> pair_freq;
    for (const auto& [sym, freq] : words) {
      for (std::size_t i = 0; i + 1 < sym.size(); ++i) {
        pair_freq[{sym[i], sym[i + 1]}] += freq;
      }
    }
    const Pair* best = nullptr;
    long best_count = 0;
    for (const auto& [pair, count] : pair_freq) {
      // std::map iterates pairs in lexicographic order, so on equal counts
      // the first seen (lexicographically smallest) pair wins.
      if (count > best_count) {
        best_count = count;
        best = &pair;
      }
    }
    if (best == nullptr || best_count < 2) break;
    result.merges.push_back(*best);
    for (auto& [sym, freq] : words) merge_pair(sym, *best);
  }
  return result;
}

std::vector<std::string> bpe_apply(std::string_view token, const BpeMerges& merges) {
  SymbolSeq sym = word_symbols(token);
  if (sym.empty()) return {};
  std::map<Pair, std::size_t> rank;
  for (std::size_t i = 0; i < merges.merges.size(); ++i) {
    rank.emplace(merges.merges[i], i);
  }
  while (sym.size() > 1) {
    std::size_t best_rank = merges.merges.size();
    for (std::size_t i = 0; i + 1 < sym.size(); ++i) {
      auto it = rank.find({sym[i], sym[i + 1]});
      if (it != rank.end() && it->second < best_rank) best_rank = it->second;
    }
    if (best_rank == merges.merges.size()) break;
    merge_pair(sym, merges.merges[best_rank]);
  }
  return sym;
}

std::vector<std::string> bpe_segment_sentence(
    const std::vector<std::string>& tokens, const BpeMerges& merges) {
  std::vector<std::string> out;
  for (const auto& tok : tokens) {
    auto pieces = bpe_apply(tok, merges);
    out.insert(out.end(), pieces.begin(), pieces.end());
  }
  return out;
}

std::vector<std::string> restore_words(std::span<const std::string> tokens,
                                       bool subword) {
  if (!subword) return {tokens.begin(), tokens.end()};
  std::vector<std::string> words;
  std::string current;
  for (const auto& tok : tokens) {
    if (is_special_form(tok)) {
      if (!current.empty()) {
        words.push_back(current);
        current.clear();
      }
      words.push_back(tok);
      continue;
    }
    if (tok.size() >= kEow.size() &&
        std::string_view(tok).substr(tok.size() - kEow.size()) == kEow) {
      current += tok.substr(0, tok.size() - kEow.size());
      words.push_back(current);
      current.clear();
    } else {
      current += tok;
    }
  }
  if (!current.empty()) words.push_back(current);
  return words;
}

void BpeMerges::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "#version: mnmt-bpe 1\n";
  for (const auto& [left, right] : merges) {
    out << left << ' ' << right << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

BpeMerges BpeMerges::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw InvalidFormat("empty merges file: " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "#version: mnmt-bpe 1") {
    throw InvalidFormat("bad merges file header: " + path.string());
  }
  BpeMerges result;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto space = line.find(' ');
    if (space == std::string::npos || space == 0 || space + 1 >= line.size()) {
      throw InvalidFormat("bad merge at " + path.string() + ":" +
                          std::to_string(lineno));
    }
    result.merges.emplace_back(line.substr(0, space), line.substr(space + 1));
  }
  return result;
}

}  // namespace mnmt
