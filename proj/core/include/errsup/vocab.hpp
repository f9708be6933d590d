#ifndef ERRSUP_VOCAB_HPP
#define ERRSUP_VOCAB_HPP

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace errsup {

// Token ids. Sentences hold content tokens only; <s>/</s> framing is added
// where a model needs it.
using Sentence = std::vector<int>;

constexpr int kBosId = 0;
constexpr int kEosId = 1;
constexpr int kUnkId = 2;

inline const char* kBosToken = "<s>";
inline const char* kEosToken = "</s>";
inline const char* kUnkToken = "<unk>";

class Vocabulary {
 public:
  // Specials only.
  Vocabulary();

  // Full token list, specials included at ids 0..2. Throws if the list does
  // not start with the three specials or contains duplicates.
  explicit Vocabulary(std::vector<std::string> tokens);

  // Specials prepended to the given content tokens (duplicates rejected).
  static Vocabulary from_content(const std::vector<std::string>& content_tokens);

  int encode(std::string_view token) const;  // kUnkId when out of vocabulary
  const std::string& decode(int id) const;
  bool contains(std::string_view token) const;

  Sentence encode_tokens(const std::vector<std::string>& tokens) const;
  std::vector<std::string> decode_ids(const Sentence& ids) const;

  int size() const { return static_cast<int>(tokens_.size()); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

// Most frequent tokens kept up to max_size - 3, ties broken by first
// occurrence; the three specials are prepended. max_size must be >= 4.
Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& corpus_lines,
                            int max_size);

}  // namespace errsup

#endif
