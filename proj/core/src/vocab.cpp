#include "errsup/vocab.hpp"

#include <algorithm>
#include <stdexcept>

namespace errsup {

Vocabulary::Vocabulary() : Vocabulary(std::vector<std::string>{kBosToken, kEosToken, kUnkToken}) {}

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.size() < 3 || tokens_[0] != kBosToken || tokens_[1] != kEosToken ||
      tokens_[2] != kUnkToken) {
    throw std::invalid_argument("vocabulary must start with <s> </s> <unk>");
  }
  index_.reserve(tokens_.size());
  for (int i = 0; i < static_cast<int>(tokens_.size()); ++i) {
    if (!index_.emplace(tokens_[i], i).second) {
      throw std::invalid_argument("duplicate token in vocabulary: " + tokens_[i]);
    }
  }
}

Vocabulary Vocabulary::from_content(const std::vector<std::string>& content_tokens) {
  std::vector<std::string> all{kBosToken, kEosToken, kUnkToken};
  all.insert(all.end(), content_tokens.begin(), content_tokens.end());
  return Vocabulary(std::move(all));
}

int Vocabulary::encode(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnkId : it->second;
}

const std::string& Vocabulary::decode(int id) const {
  if (id < 0 || id >= size()) throw std::out_of_range("token id out of range");
  return tokens_[id];
}

bool Vocabulary::contains(std::string_view token) const {
  return index_.count(std::string(token)) > 0;
}

Sentence Vocabulary::encode_tokens(const std::vector<std::string>& tokens) const {
  Sentence ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(encode(t));
  return ids;
}

std::vector<std::string> Vocabulary::decode_ids(const Sentence& ids) const {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (int id : ids) out.push_back(decode(id));
  return out;
}

Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& corpus_lines,
                            int max_size) {
  if (max_size < 4) throw std::invalid_argument("max_size must be at least 4");
  if (corpus_lines.empty()) throw std::invalid_argument("empty corpus");

  std::unordered_map<std::string, int> counts;
  std::unordered_map<std::string, int> first_seen;
  int position = 0;
  for (const auto& line : corpus_lines) {
    for (const auto& token : line) {
      if (token == kBosToken || token == kEosToken || token == kUnkToken) continue;
      auto [it, inserted] = counts.emplace(token, 0);
      ++it->second;
      if (inserted) first_seen.emplace(token, position);
      ++position;
    }
  }

  std::vector<std::string> ranked;
  ranked.reserve(counts.size());
  for (const auto& [token, _] : counts) ranked.push_back(token);
  std::sort(ranked.begin(), ranked.end(), [&](const std::string& a, const std::string& b) {
    const int ca = counts.at(a), cb = counts.at(b);
    if (ca != cb) return ca > cb;
    return first_seen.at(a) < first_seen.at(b);
  });
  if (static_cast<int>(ranked.size()) > max_size - 3) ranked.resize(max_size - 3);
  return Vocabulary::from_content(ranked);
}

}  // namespace errsup
