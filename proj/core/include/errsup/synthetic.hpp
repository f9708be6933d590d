#ifndef ERRSUP_SYNTHETIC_HPP
#define ERRSUP_SYNTHETIC_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "errsup/corpus.hpp"

namespace errsup {

// Deterministic symbol-level transduction task: every source symbol expands
// to one or two target symbols. Stands in for parallel text at desk scale.
struct SyntheticTaskSpec {
  int vocab_size = 0;  // size of the source alphabet == mapping size
  int min_len = 1;
  int max_len = 1;
  std::map<std::string, std::vector<std::string>> mapping;
  std::uint64_t seed = 0;

  void validate() const;

  std::string to_json() const;
  static SyntheticTaskSpec from_json(const std::string& text);
  static SyntheticTaskSpec load(const std::string& path);
  void save(const std::string& path) const;
};

// Random task with source symbols s0..s{vocab_size-1} and target symbols
// drawn from t0..t{target_vocab_size-1}; each source symbol emits two target
// symbols with probability p_two, one otherwise.
SyntheticTaskSpec make_random_task(int vocab_size, int target_vocab_size, double p_two,
                                   int min_len, int max_len, std::uint64_t seed);

// Sources drawn uniformly over lengths [min_len, max_len] and over the source
// alphabet; targets by mapping expansion; gold alignments link each source
// position to all of its emitted target positions. Pure function of
// (spec, seed, n_examples).
ParallelCorpus generate_synthetic_corpus(const SyntheticTaskSpec& spec, int n_examples);

}  // namespace errsup

#endif
