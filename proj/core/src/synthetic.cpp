#include "errsup/synthetic.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "errsup/rng.hpp"

namespace errsup {

void SyntheticTaskSpec::validate() const {
  if (min_len < 1) throw std::invalid_argument("min_len must be >= 1");
  if (max_len < min_len) throw std::invalid_argument("max_len must be >= min_len");
  if (static_cast<int>(mapping.size()) != vocab_size) {
    throw std::invalid_argument("mapping must be total over the source alphabet");
  }
  for (const auto& [sym, outs] : mapping) {
    if (outs.empty() || outs.size() > 2) {
      throw std::invalid_argument("mapping for " + sym + " must emit 1 or 2 symbols");
    }
  }
}

std::string SyntheticTaskSpec::to_json() const {
  nlohmann::json j;
  j["vocab_size"] = vocab_size;
  j["min_len"] = min_len;
  j["max_len"] = max_len;
  j["mapping"] = mapping;
  j["seed"] = seed;
  return j.dump(2);
}

SyntheticTaskSpec SyntheticTaskSpec::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  SyntheticTaskSpec spec;
  spec.vocab_size = j.at("vocab_size").get<int>();
  spec.min_len = j.at("min_len").get<int>();
  spec.max_len = j.at("max_len").get<int>();
  spec.mapping = j.at("mapping").get<std::map<std::string, std::vector<std::string>>>();
  spec.seed = j.at("seed").get<std::uint64_t>();
  spec.validate();
  return spec;
}

SyntheticTaskSpec SyntheticTaskSpec::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open task spec: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return from_json(text);
}

void SyntheticTaskSpec::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write task spec: " + path);
  out << to_json() << '\n';
}

SyntheticTaskSpec make_random_task(int vocab_size, int target_vocab_size, double p_two,
                                   int min_len, int max_len, std::uint64_t seed) {
  if (vocab_size < 1 || target_vocab_size < 1) {
    throw std::invalid_argument("alphabet sizes must be positive");
  }
  SyntheticTaskSpec spec;
  spec.vocab_size = vocab_size;
  spec.min_len = min_len;
  spec.max_len = max_len;
  spec.seed = seed;
  Rng rng = Rng::derive(seed, /*stream=*/0x7a5);
  for (int i = 0; i < vocab_size; ++i) {
    const int n_out = rng.uniform() < p_two ? 2 : 1;
    std::vector<std::string> outs;
    for (int k = 0; k < n_out; ++k) {
      outs.push_back("t" + std::to_string(rng.uniform_int(0, target_vocab_size - 1)));
    }
    spec.mapping["s" + std::to_string(i)] = std::move(outs);
  }
  spec.validate();
  return spec;
}

ParallelCorpus generate_synthetic_corpus(const SyntheticTaskSpec& spec, int n_examples) {
  if (n_examples < 1) throw std::invalid_argument("n_examples must be >= 1");
  spec.validate();

  // Alphabets in deterministic order: mapping key order for the source,
  // first-emission order for the target.
  std::vector<std::string> source_symbols;
  std::vector<std::string> target_symbols;
  std::map<std::string, bool> seen_target;
  for (const auto& [sym, outs] : spec.mapping) {
    source_symbols.push_back(sym);
    for (const auto& t : outs) {
      if (!seen_target[t]) {
        seen_target[t] = true;
        target_symbols.push_back(t);
      }
    }
  }

  ParallelCorpus corpus;
  corpus.source_vocab = Vocabulary::from_content(source_symbols);
  corpus.target_vocab = Vocabulary::from_content(target_symbols);

  Rng rng = Rng::derive(spec.seed, /*stream=*/0x9e7);
  corpus.examples.reserve(n_examples);
  for (int n = 0; n < n_examples; ++n) {
    const int len = rng.uniform_int(spec.min_len, spec.max_len);
    ParallelExample ex;
    Alignment align;
    std::vector<std::string> tgt_tokens;
    for (int p = 0; p < len; ++p) {
      const auto& sym = source_symbols[rng.uniform_int(0, spec.vocab_size - 1)];
      ex.source.push_back(corpus.source_vocab.encode(sym));
      for (const auto& out : spec.mapping.at(sym)) {
        tgt_tokens.push_back(out);
        align.emplace_back(p + 1, static_cast<int>(tgt_tokens.size()));
      }
    }
    ex.target = corpus.target_vocab.encode_tokens(tgt_tokens);
    ex.alignment = std::move(align);
    corpus.examples.push_back(std::move(ex));
  }
  return corpus;
}

}  // namespace errsup
