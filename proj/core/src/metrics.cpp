#include "errsup/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "errsup/rng.hpp"

namespace errsup {

NGramProfile::NGramProfile(const Sentence& x, int max_n) : max_n_(max_n) {
  by_order_.resize(max_n_);
  totals_.assign(max_n_, 0);
  const int len = static_cast<int>(x.size());
  for (int n = 1; n <= max_n_; ++n) {
    totals_[n - 1] = std::max(0, len - n + 1);
    auto& table = by_order_[n - 1];
    for (int p = 0; p + n <= len; ++p) {
      table[Sentence(x.begin() + p, x.begin() + p + n)]++;
    }
  }
  for (int p = 0; p + 1 < len; ++p) {
    if (x[p] == x[p + 1]) {
      consec_[x[p]]++;
      ++consec_total_;
    }
  }
}

int NGramProfile::count(const Sentence& ngram) const {
  const int n = static_cast<int>(ngram.size());
  if (n < 1 || n > max_n_) return 0;
  const auto& table = by_order_[n - 1];
  auto it = table.find(ngram);
  return it == table.end() ? 0 : it->second;
}

const std::map<Sentence, int>& NGramProfile::ngrams(int n) const {
  if (n < 1 || n > max_n_) throw std::out_of_range("n-gram order out of range");
  return by_order_[n - 1];
}

int NGramProfile::total(int n) const {
  if (n < 1 || n > max_n_) throw std::out_of_range("n-gram order out of range");
  return totals_[n - 1];
}

double RepWeights::at(int n) const {
  switch (n) {
    case 1: return lambda1;
    case 2: return lambda2;
    case 3: return lambda3;
    case 4: return lambda4;
    default: throw std::out_of_range("repetition weight order out of range");
  }
}

static double consecutive_excess(const NGramProfile& t, const NGramProfile& r) {
  double sum = 0.0;
  for (const auto& [w, tc] : t.consecutive_unigrams()) {
    auto it = r.consecutive_unigrams().find(w);
    const int rc = it == r.consecutive_unigrams().end() ? 0 : it->second;
    sum += std::max(0, tc - rc);
  }
  return sum;
}

double erep(const Sentence& r, const Sentence& t, const RepWeights& w) {
  const NGramProfile pr(r), pt(t);
  double sigma = w.lambda1 * consecutive_excess(pt, pr);
  for (int n = 2; n <= 4; ++n) {
    double excess = 0.0;
    for (const auto& [s, tc] : pt.ngrams(n)) {
      if (tc < 2) continue;
      excess += std::max(0, tc - pr.count(s));
    }
    sigma += w.at(n) * excess;
  }
  double denom = pt.consecutive_total();
  for (int n = 2; n <= 4; ++n) denom += pt.total(n);
  return denom > 0 ? 100.0 * sigma / denom : 0.0;
}

double rep(const Sentence& r, const Sentence& t, int n, const RepWeights& w) {
  if (n < 2 || n > 4) throw std::invalid_argument("REP order must be 2, 3 or 4");
  const NGramProfile pr(r), pt(t);
  double sigma = w.lambda1 * consecutive_excess(pt, pr);
  double excess = 0.0;
  for (const auto& [s, rc] : pr.ngrams(n)) {
    const int tc = pt.count(s);
    if (tc < 2) continue;
    excess += std::max(0, tc - rc);
  }
  sigma += w.lambda2 * excess;
  const double denom = pr.consecutive_total() + pr.total(n);
  return denom > 0 ? 100.0 * sigma / denom : 0.0;
}

double drop_score(const AlignmentCoverage& cov) {
  if (cov.c_ref.empty()) return 0.0;
  int covered = 0;
  for (int i : cov.c_ref) covered += cov.c_hyp.count(i);
  return 100.0 * (1.0 - static_cast<double>(covered) / static_cast<double>(cov.c_ref.size()));
}

int lcs_length(const Sentence& a, const Sentence& b) {
  const int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
  std::vector<int> prev(nb + 1, 0), cur(nb + 1, 0);
  for (int i = 1; i <= na; ++i) {
    for (int j = 1; j <= nb; ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[nb];
}

std::vector<int> lcs_matched_ref_positions(const Sentence& ref, const Sentence& hyp) {
  const int nr = static_cast<int>(ref.size()), nh = static_cast<int>(hyp.size());
  std::vector<std::vector<int>> dp(nr + 1, std::vector<int>(nh + 1, 0));
  for (int i = 1; i <= nr; ++i) {
    for (int j = 1; j <= nh; ++j) {
      dp[i][j] = ref[i - 1] == hyp[j - 1] ? dp[i - 1][j - 1] + 1
                                          : std::max(dp[i - 1][j], dp[i][j - 1]);
    }
  }
  std::vector<int> matched;
  int i = nr, j = nh;
  while (i > 0 && j > 0) {
    if (ref[i - 1] == hyp[j - 1] && dp[i][j] == dp[i - 1][j - 1] + 1) {
      matched.push_back(i);
      --i;
      --j;
    } else if (dp[i - 1][j] >= dp[i][j - 1]) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(matched.begin(), matched.end());
  return matched;
}

AlignmentCoverage coverage_from_gold(const ParallelExample& example, const Sentence& hyp) {
  if (!example.alignment) throw std::invalid_argument("example carries no gold alignment");
  AlignmentCoverage cov;
  const auto matched = lcs_matched_ref_positions(example.target, hyp);
  const std::set<int> matched_set(matched.begin(), matched.end());
  for (const auto& [i, j] : *example.alignment) {
    cov.c_ref.insert(i);
    if (matched_set.count(j)) cov.c_hyp.insert(i);
  }
  return cov;
}

double gleu(const Sentence& r, const Sentence& t, int max_n) {
  if (r.empty() || t.empty()) return 0.0;
  const NGramProfile pr(r, max_n), pt(t, max_n);
  long matched = 0, t_total = 0, r_total = 0;
  for (int n = 1; n <= max_n; ++n) {
    for (const auto& [s, tc] : pt.ngrams(n)) matched += std::min(tc, pr.count(s));
    t_total += pt.total(n);
    r_total += pr.total(n);
  }
  if (t_total == 0 || r_total == 0) return 0.0;
  const double precision = static_cast<double>(matched) / static_cast<double>(t_total);
  const double recall = static_cast<double>(matched) / static_cast<double>(r_total);
  return 100.0 * std::min(precision, recall);
}

BleuResult corpus_bleu(std::span<const Sentence> refs, std::span<const Sentence> hyps,
                       int max_n) {
  if (refs.size() != hyps.size()) throw std::invalid_argument("corpus_bleu: length mismatch");
  if (refs.empty()) throw std::invalid_argument("corpus_bleu: empty corpus");
  if (max_n < 1 || max_n > 4) throw std::invalid_argument("corpus_bleu: max_n must be in 1..4");

  BleuResult res;
  for (std::size_t k = 0; k < refs.size(); ++k) {
    const NGramProfile pr(refs[k], max_n), pt(hyps[k], max_n);
    res.ref_len += static_cast<long>(refs[k].size());
    res.hyp_len += static_cast<long>(hyps[k].size());
    for (int n = 1; n <= max_n; ++n) {
      for (const auto& [s, tc] : pt.ngrams(n)) {
        res.matched[n - 1] += std::min(tc, pr.count(s));
      }
      res.total[n - 1] += pt.total(n);
    }
  }

  res.brevity_penalty =
      res.hyp_len == 0
          ? 0.0
          : std::min(1.0, std::exp(1.0 - static_cast<double>(res.ref_len) /
                                             static_cast<double>(res.hyp_len)));

  double log_sum = 0.0;
  int orders = 0;
  for (int n = 1; n <= max_n; ++n) {
    if (res.total[n - 1] == 0) continue;  // no hypothesis n-grams of this order
    ++orders;
    if (res.matched[n - 1] == 0) {
      res.bleu = 0.0;
      return res;
    }
    log_sum += std::log(static_cast<double>(res.matched[n - 1]) /
                        static_cast<double>(res.total[n - 1]));
  }
  res.bleu = orders == 0 ? 0.0 : 100.0 * res.brevity_penalty * std::exp(log_sum / orders);
  return res;
}

double rouge_l(const Sentence& r, const Sentence& t, double beta) {
  if (r.empty() || t.empty()) return 0.0;
  const int lcs = lcs_length(r, t);
  if (lcs == 0) return 0.0;
  const double p = static_cast<double>(lcs) / static_cast<double>(t.size());
  const double rec = static_cast<double>(lcs) / static_cast<double>(r.size());
  const double b2 = beta * beta;
  return 100.0 * (1.0 + b2) * p * rec / (rec + b2 * p);
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("pearson: length mismatch");
  const std::size_t n = xs.size();
  if (n < 2) throw std::invalid_argument("pearson: need at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw std::invalid_argument("pearson: zero variance");
  return sxy / std::sqrt(sxx * syy);
}

double paired_bootstrap(const CorpusMetric& metric, std::span<const Sentence> refs,
                        std::span<const Sentence> hyps_a, std::span<const Sentence> hyps_b,
                        int n_resamples, std::uint64_t seed) {
  if (refs.size() != hyps_a.size() || refs.size() != hyps_b.size()) {
    throw std::invalid_argument("paired_bootstrap: length mismatch");
  }
  if (n_resamples < 100) throw std::invalid_argument("paired_bootstrap: need >= 100 resamples");

  const double observed_a = metric(refs, hyps_a);
  const double observed_b = metric(refs, hyps_b);
  if (observed_a == observed_b) return 1.0;
  const bool a_wins = observed_a > observed_b;

  const int n = static_cast<int>(refs.size());
  int failures = 0;
  std::vector<Sentence> rr(n), ra(n), rb(n);
  for (int k = 0; k < n_resamples; ++k) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(k));
    for (int i = 0; i < n; ++i) {
      const int idx = rng.uniform_int(0, n - 1);
      rr[i] = refs[idx];
      ra[i] = hyps_a[idx];
      rb[i] = hyps_b[idx];
    }
    const double sa = metric(rr, ra);
    const double sb = metric(rr, rb);
    const bool winner_wins = a_wins ? sa > sb : sb > sa;
    if (!winner_wins) ++failures;
  }
  return static_cast<double>(failures) / static_cast<double>(n_resamples);
}

SentenceScore score_sentence(const Sentence& ref, const Sentence& hyp,
                             const std::optional<AlignmentCoverage>& coverage,
                             const RepWeights& w) {
  SentenceScore s;
  const NGramProfile pr(ref), pt(hyp);

  s.erep_sigma = w.lambda1 * consecutive_excess(pt, pr);
  for (int n = 2; n <= 4; ++n) {
    double excess = 0.0;
    for (const auto& [g, tc] : pt.ngrams(n)) {
      if (tc < 2) continue;
      excess += std::max(0, tc - pr.count(g));
    }
    s.erep_sigma += w.at(n) * excess;
  }
  s.erep_denom = pt.consecutive_total();
  for (int n = 2; n <= 4; ++n) s.erep_denom += pt.total(n);

  for (int n = 1; n <= 4; ++n) {
    for (const auto& [g, tc] : pt.ngrams(n)) s.bleu_matched[n - 1] += std::min(tc, pr.count(g));
    s.bleu_total[n - 1] += pt.total(n);
  }
  s.ref_len = static_cast<long>(ref.size());
  s.hyp_len = static_cast<long>(hyp.size());
  s.gleu = gleu(ref, hyp);
  s.rouge_l = rouge_l(ref, hyp);

  if (coverage) {
    s.drop_ref = static_cast<long>(coverage->c_ref.size());
    long covered = 0;
    for (int i : coverage->c_ref) covered += coverage->c_hyp.count(i);
    s.drop_covered = covered;
  }
  return s;
}

CorpusReport aggregate_scores(std::span<const SentenceScore> scores) {
  if (scores.empty()) throw std::invalid_argument("aggregate_scores: empty corpus");
  CorpusReport rep;
  double sigma = 0.0, denom = 0.0, gleu_sum = 0.0, rouge_sum = 0.0;
  long ref_len = 0, hyp_len = 0, drop_cov = 0, drop_ref = 0;
  std::array<long, 4> matched{}, total{};
  bool has_drop = false;
  for (const auto& s : scores) {
    sigma += s.erep_sigma;
    denom += s.erep_denom;
    gleu_sum += s.gleu;
    rouge_sum += s.rouge_l;
    ref_len += s.ref_len;
    hyp_len += s.hyp_len;
    for (int n = 0; n < 4; ++n) {
      matched[n] += s.bleu_matched[n];
      total[n] += s.bleu_total[n];
    }
    if (s.drop_ref >= 0) {
      has_drop = true;
      drop_cov += s.drop_covered;
      drop_ref += s.drop_ref;
    }
  }
  rep.erep = denom > 0 ? 100.0 * sigma / denom : 0.0;
  rep.gleu = gleu_sum / static_cast<double>(scores.size());
  rep.rouge_l = rouge_sum / static_cast<double>(scores.size());
  if (has_drop) {
    rep.drop = drop_ref > 0
                   ? 100.0 * (1.0 - static_cast<double>(drop_cov) / static_cast<double>(drop_ref))
                   : 0.0;
  }

  rep.brevity_penalty =
      hyp_len == 0 ? 0.0
                   : std::min(1.0, std::exp(1.0 - static_cast<double>(ref_len) /
                                                      static_cast<double>(hyp_len)));
  double log_sum = 0.0;
  int orders = 0;
  bool zero = false;
  for (int n = 0; n < 4; ++n) {
    if (total[n] == 0) continue;
    ++orders;
    if (matched[n] == 0) {
      zero = true;
      break;
    }
    log_sum += std::log(static_cast<double>(matched[n]) / static_cast<double>(total[n]));
  }
  rep.bleu = (zero || orders == 0)
                 ? 0.0
                 : 100.0 * rep.brevity_penalty * std::exp(log_sum / orders);
  return rep;
}

double corpus_erep(std::span<const Sentence> refs, std::span<const Sentence> hyps,
                   const RepWeights& w) {
  if (refs.size() != hyps.size()) throw std::invalid_argument("corpus_erep: length mismatch");
  std::vector<SentenceScore> scores;
  scores.reserve(refs.size());
  for (std::size_t i = 0; i < refs.size(); ++i) {
    scores.push_back(score_sentence(refs[i], hyps[i], std::nullopt, w));
  }
  double sigma = 0.0, denom = 0.0;
  for (const auto& s : scores) {
    sigma += s.erep_sigma;
    denom += s.erep_denom;
  }
  return denom > 0 ? 100.0 * sigma / denom : 0.0;
}

double corpus_gleu(std::span<const Sentence> refs, std::span<const Sentence> hyps) {
  if (refs.size() != hyps.size()) throw std::invalid_argument("corpus_gleu: length mismatch");
  if (refs.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < refs.size(); ++i) sum += gleu(refs[i], hyps[i]);
  return sum / static_cast<double>(refs.size());
}

}  // namespace errsup
