#ifndef ERRSUP_METRICS_HPP
#define ERRSUP_METRICS_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "errsup/corpus.hpp"
#include "errsup/vocab.hpp"

namespace errsup {

// All scores live in [0, 100]; lower is better for eREP/REP/DROP, higher for
// the rest. Every function here is pure.

// Counts of every n-gram for n in 1..max_n plus consecutive-unigram counts
// x(ww): positions p with x_p == x_{p+1} == w.
class NGramProfile {
 public:
  explicit NGramProfile(const Sentence& x, int max_n = 4);

  int count(const Sentence& ngram) const;
  const std::map<Sentence, int>& ngrams(int n) const;
  int total(int n) const;  // max(0, |x| - n + 1)
  const std::map<int, int>& consecutive_unigrams() const { return consec_; }
  int consecutive_total() const { return consec_total_; }

 private:
  int max_n_;
  std::vector<std::map<Sentence, int>> by_order_;  // index 0 -> 1-grams
  std::vector<int> totals_;
  std::map<int, int> consec_;
  int consec_total_ = 0;
};

struct RepWeights {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double lambda3 = 1.0;
  double lambda4 = 1.0;

  double at(int n) const;
};

// Hypothesis-pooled repetition score over consecutive unigrams and n-grams
// n = 2..4; the excess-count universe is the hypothesis n-gram set.
double erep(const Sentence& r, const Sentence& t, const RepWeights& w = {});

// Single-order repetition score with reference-side universe and
// reference-mass denominator; n must be 2, 3 or 4.
double rep(const Sentence& r, const Sentence& t, int n, const RepWeights& w = {});

struct AlignmentCoverage {
  std::set<int> c_ref;  // source indices aligned in source<->reference
  std::set<int> c_hyp;  // source indices aligned in source<->hypothesis
};

// 100 * (1 - |c_ref intersect c_hyp| / |c_ref|); 0 when c_ref is empty.
double drop_score(const AlignmentCoverage& cov);

// Reference positions (1-based) matched by a longest common subsequence of
// ref and hyp. Deterministic backtrace.
std::vector<int> lcs_matched_ref_positions(const Sentence& ref, const Sentence& hyp);
int lcs_length(const Sentence& a, const Sentence& b);

// Coverage sets for a hypothesis against an example carrying gold
// source-reference alignment: c_ref covers every gold-aligned source index,
// c_hyp those whose reference tokens survive in an LCS with the hypothesis.
AlignmentCoverage coverage_from_gold(const ParallelExample& example, const Sentence& hyp);

// min of pooled clipped n-gram precision and recall, n = 1..max_n; 0 when
// either sentence is empty.
double gleu(const Sentence& r, const Sentence& t, int max_n = 4);

struct BleuResult {
  double bleu = 0.0;           // [0, 100]
  double brevity_penalty = 1.0;
  std::array<long, 4> matched{};  // clipped matches per order
  std::array<long, 4> total{};    // hypothesis n-grams per order
  long ref_len = 0;
  long hyp_len = 0;
};

// Corpus-level unsmoothed BLEU with brevity penalty reported separately.
// Orders with no hypothesis n-grams anywhere in the corpus are excluded from
// the geometric mean; a zero precision at any included order gives 0.
BleuResult corpus_bleu(std::span<const Sentence> refs, std::span<const Sentence> hyps,
                       int max_n = 4);

// LCS F-measure: P = LCS/|t|, R = LCS/|r|, F = (1+b^2)PR / (R + b^2 P).
double rouge_l(const Sentence& r, const Sentence& t, double beta = 1.2);

// Sample Pearson correlation coefficient; throws on length < 2, length
// mismatch, or zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

using CorpusMetric =
    std::function<double(std::span<const Sentence>, std::span<const Sentence>)>;

// Paired bootstrap resampling over sentence indices: the returned p-value is
// the fraction of resamples in which the observed winner fails to strictly
// win (ties count against significance). Identical observed scores give
// p = 1. Resample i uses an RNG derived from (seed, i), so the result is
// independent of evaluation order and thread count.
double paired_bootstrap(const CorpusMetric& metric, std::span<const Sentence> refs,
                        std::span<const Sentence> hyps_a, std::span<const Sentence> hyps_b,
                        int n_resamples, std::uint64_t seed);

// Per-sentence components from which every corpus total is recomputable.
struct SentenceScore {
  double erep_sigma = 0.0;
  double erep_denom = 0.0;
  std::array<long, 4> bleu_matched{};
  std::array<long, 4> bleu_total{};
  long ref_len = 0;
  long hyp_len = 0;
  double gleu = 0.0;
  double rouge_l = 0.0;
  long drop_covered = -1;  // -1: no alignment available
  long drop_ref = -1;
};

SentenceScore score_sentence(const Sentence& ref, const Sentence& hyp,
                             const std::optional<AlignmentCoverage>& coverage,
                             const RepWeights& w = {});

struct CorpusReport {
  double erep = 0.0;
  std::optional<double> drop;
  double bleu = 0.0;
  double brevity_penalty = 1.0;
  double gleu = 0.0;
  double rouge_l = 0.0;
};

// Pools eREP numerators/denominators, DROP coverage counts and BLEU n-gram
// counts; averages GLEU and ROUGE-L.
CorpusReport aggregate_scores(std::span<const SentenceScore> scores);

// Convenience pooled corpus scores.
double corpus_erep(std::span<const Sentence> refs, std::span<const Sentence> hyps,
                   const RepWeights& w = {});
double corpus_gleu(std::span<const Sentence> refs, std::span<const Sentence> hyps);

}  // namespace errsup

#endif
