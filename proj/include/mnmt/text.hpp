#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mnmt {

// Whitespace split with leading/trailing ASCII punctuation detached as
// separate tokens. Case is preserved; multi-byte UTF-8 sequences count as
// word characters. Deterministic by construction.
std::vector<std::string> tokenize(std::string_view text);

// Token ↔ id map with reserved specials PAD=0, BOS=1, EOS=2, UNK=3.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kBos = 1;
  static constexpr int kEos = 2;
  static constexpr int kUnk = 3;
  static constexpr int kNumSpecials = 4;

  Vocabulary();

  // Specials first, then tokens with frequency >= min_count ordered by
  // (frequency desc, token asc).
  static Vocabulary build(const std::vector<std::vector<std::string>>& corpus,
                          int min_count);

  int id(std::string_view token) const;  // UNK when absent
  bool contains(std::string_view token) const;
  const std::string& token(int id) const;  // out of range -> invalid_argument
  std::size_t size() const { return tokens_.size(); }

  // Appends EOS; unknown tokens map to UNK.
  std::vector<int> encode(const std::vector<std::string>& tokens) const;
  // Stops at the first EOS; out-of-range ids -> invalid_argument.
  std::vector<std::string> decode(std::span<const int> ids) const;

  // One token per line, line number = id - 4 (specials implicit).
  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

  std::uint64_t content_hash() const;

 private:
  void add_token(std::string token);
  std::vector<std::string> tokens_;
  std::vector<std::pair<std::string, int>> index_;  // sorted by token
  void rebuild_index();
};

// Ordered BPE merge list with the `</w>` end-of-word convention.
struct BpeMerges {
  std::vector<std::pair<std::string, std::string>> merges;

  bool empty() const { return merges.empty(); }
  std::size_t size() const { return merges.size(); }

  // Header line "#version: mnmt-bpe 1", then one "left right" pair per line.
  void save(const std::filesystem::path& path) const;
  static BpeMerges load(const std::filesystem::path& path);
};

// Standard BPE learning: iteratively merge the most frequent adjacent symbol
// pair; ties broken by lexicographic pair order; stops early once no pair
// occurs at least twice.
BpeMerges bpe_learn(const std::vector<std::vector<std::string>>& corpus,
                    int num_merges);

// Applies merges in priority order until fixpoint. Concatenating the result
// and stripping the trailing "</w>" recovers the token exactly.
std::vector<std::string> bpe_apply(std::string_view token, const BpeMerges& merges);

std::vector<std::string> bpe_segment_sentence(
    const std::vector<std::string>& tokens, const BpeMerges& merges);

// Inverse of subword segmentation: joins "</w>"-terminated pieces back into
// words. With subword=false tokens are already words.
std::vector<std::string> restore_words(std::span<const std::string> tokens,
                                       bool subword);

// UTF-8 code point split (bytes with invalid encoding pass through singly).
std::vector<std::string> utf8_chars(std::string_view s);

}  // namespace mnmt
