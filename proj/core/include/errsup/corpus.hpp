#ifndef ERRSUP_CORPUS_HPP
#define ERRSUP_CORPUS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errsup/vocab.hpp"

namespace errsup {

// Source-target index pair, 1-based on both sides.
using AlignmentPair = std::pair<int, int>;
using Alignment = std::vector<AlignmentPair>;

struct ParallelExample {
  Sentence source;
  Sentence target;
  std::optional<Alignment> alignment;  // sorted, unique
};

struct ParallelCorpus {
  Vocabulary source_vocab;
  Vocabulary target_vocab;
  std::vector<ParallelExample> examples;

  std::size_t size() const { return examples.size(); }
};

// Drops pairs whose longer side exceeds max_len and pairs with an empty side.
ParallelCorpus filter_training_pairs(const ParallelCorpus& corpus, int max_len);

// One space-separated sentence per line, UTF-8. A single trailing newline is
// not an extra (empty) sentence.
std::vector<std::vector<std::string>> read_token_lines(const std::string& path);
void write_token_lines(const std::string& path,
                       const std::vector<std::vector<std::string>>& lines);

// Alignment files carry one line per sentence pair with space-separated
// "i-j" records, 1-based.
std::vector<Alignment> read_alignments(const std::string& path);
void write_alignments(const std::string& path, const std::vector<std::optional<Alignment>>& alignments);

// Vocabularies are built from the file contents (uncapped) unless given.
ParallelCorpus load_corpus(const std::string& source_path, const std::string& target_path,
                           const std::optional<std::string>& alignment_path = std::nullopt);
ParallelCorpus load_corpus(const std::string& source_path, const std::string& target_path,
                           const std::optional<std::string>& alignment_path,
                           const Vocabulary& source_vocab, const Vocabulary& target_vocab);

void save_corpus(const ParallelCorpus& corpus, const std::string& source_path,
                 const std::string& target_path,
                 const std::optional<std::string>& alignment_path = std::nullopt);

// Token-level equality (surface forms plus alignments); vocabularies may
// order ids differently.
bool corpora_equal(const ParallelCorpus& a, const ParallelCorpus& b);

}  // namespace errsup

#endif
