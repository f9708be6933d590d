#ifndef ERRSUP_NEGATIVES_HPP
#define ERRSUP_NEGATIVES_HPP

#include "errsup/rng.hpp"
#include "errsup/vocab.hpp"

namespace errsup {

// Artificial negative examples: corruptions of a reference that are
// guaranteed to contain the targeted error type.

struct RepeatConfig {
  int m_rep = 4;  // max consecutive span length
  int n_rep = 4;  // max duplication count
};

struct DropConfig {
  int m_drop = 4;  // max consecutive dropped span
};

// Duplicates a span of i consecutive tokens starting at token j, inserting
// copies after k distinct gap positions. i ~ U[1, min(m_rep, n)],
// j ~ U[1, n-i+1], k ~ U[1, n_rep]. Insertion gaps are "after token p" with
// p drawn without replacement from {1..n} \ {j..j+i-2}, so the original
// consecutive run stays intact. When fewer than k legal gaps exist, all of
// them are used. Throws on an empty input.
Sentence make_repeat(const Sentence& reference, const RepeatConfig& cfg, Rng& rng);

// Removes i consecutive tokens starting at token j. The span cap is n when
// 2 < n < m_drop, m_drop otherwise; i ~ U[1, min(cap, n)], j ~ U[1, n-i+1].
// A single-token reference, or a deletion that empties the sentence, yields
// [</s>]. Throws on an empty input.
Sentence make_drop(const Sentence& reference, const DropConfig& cfg, Rng& rng);

enum class ErrorType { kRepeat, kDrop };

ErrorType error_type_from_string(const std::string& name);
const char* to_string(ErrorType type);

struct NegativeConfig {
  ErrorType type = ErrorType::kRepeat;
  RepeatConfig repeat;
  DropConfig drop;
};

Sentence make_negative(const Sentence& reference, const NegativeConfig& cfg, Rng& rng);

}  // namespace errsup

#endif
