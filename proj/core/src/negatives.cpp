#include "errsup/negatives.hpp"

#include <algorithm>
#include <stdexcept>

namespace errsup {

Sentence make_repeat(const Sentence& reference, const RepeatConfig& cfg, Rng& rng) {
  const int n = static_cast<int>(reference.size());
  if (n < 1) throw std::invalid_argument("cannot corrupt empty sentence");
  if (cfg.m_rep < 1 || cfg.n_rep < 1) throw std::invalid_argument("repeat config must be >= 1");

  const int i = rng.uniform_int(1, std::min(cfg.m_rep, n));
  const int j = rng.uniform_int(1, n - i + 1);
  const int k = rng.uniform_int(1, cfg.n_rep);

  // Legal gaps are "after token p" for p in {1..n} minus the gaps strictly
  // inside the duplicated run {j..j+i-2}.
  std::vector<int> legal;
  legal.reserve(n);
  for (int p = 1; p <= n; ++p) {
    if (p >= j && p <= j + i - 2) continue;
    legal.push_back(p);
  }
  const int take = std::min<int>(k, static_cast<int>(legal.size()));
  std::vector<bool> insert_after(n + 1, false);
  if (take == static_cast<int>(legal.size())) {
    for (int p : legal) insert_after[p] = true;
  } else {
    const auto picks = rng.sample_distinct(0, static_cast<int>(legal.size()) - 1, take);
    for (int idx : picks) insert_after[legal[idx]] = true;
  }

  Sentence out;
  out.reserve(n + static_cast<std::size_t>(take) * i);
  for (int p = 1; p <= n; ++p) {
    out.push_back(reference[p - 1]);
    if (insert_after[p]) {
      for (int q = j; q <= j + i - 1; ++q) out.push_back(reference[q - 1]);
    }
  }
  return out;
}

Sentence make_drop(const Sentence& reference, const DropConfig& cfg, Rng& rng) {
  const int n = static_cast<int>(reference.size());
  if (n < 1) throw std::invalid_argument("cannot corrupt empty sentence");
  if (cfg.m_drop < 1) throw std::invalid_argument("drop config must be >= 1");

  if (n == 1) return Sentence{kEosId};

  const int cap = (n > 2 && n < cfg.m_drop) ? n : cfg.m_drop;
  const int i = rng.uniform_int(1, std::min(cap, n));
  const int j = rng.uniform_int(1, n - i + 1);

  Sentence out;
  out.reserve(n - i);
  for (int p = 1; p <= n; ++p) {
    if (p >= j && p <= j + i - 1) continue;
    out.push_back(reference[p - 1]);
  }
  if (out.empty()) return Sentence{kEosId};
  return out;
}

ErrorType error_type_from_string(const std::string& name) {
  if (name == "repeat") return ErrorType::kRepeat;
  if (name == "drop") return ErrorType::kDrop;
  throw std::invalid_argument("unknown error type: " + name);
}

const char* to_string(ErrorType type) {
  return type == ErrorType::kRepeat ? "repeat" : "drop";
}

Sentence make_negative(const Sentence& reference, const NegativeConfig& cfg, Rng& rng) {
  return cfg.type == ErrorType::kRepeat ? make_repeat(reference, cfg.repeat, rng)
                                        : make_drop(reference, cfg.drop, rng);
}

}  // namespace errsup
