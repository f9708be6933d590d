#include "errsup/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace errsup {

ParallelCorpus filter_training_pairs(const ParallelCorpus& corpus, int max_len) {
  if (max_len < 1) throw std::invalid_argument("max_len must be >= 1");
  ParallelCorpus out;
  out.source_vocab = corpus.source_vocab;
  out.target_vocab = corpus.target_vocab;
  for (const auto& ex : corpus.examples) {
    const auto longest = std::max(ex.source.size(), ex.target.size());
    if (ex.source.empty() || ex.target.empty()) continue;
    if (static_cast<int>(longest) > max_len) continue;
    out.examples.push_back(ex);
  }
  return out;
}

std::vector<std::vector<std::string>> read_token_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::vector<std::vector<std::string>> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> tokens;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) tokens.push_back(tok);
    lines.push_back(std::move(tokens));
  }
  return lines;
}

void write_token_lines(const std::string& path,
                       const std::vector<std::vector<std::string>>& lines) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  for (const auto& line : lines) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i) out << ' ';
      out << line[i];
    }
    out << '\n';
  }
}

std::vector<Alignment> read_alignments(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::vector<Alignment> out;
  std::string line;
  while (std::getline(in, line)) {
    Alignment align;
    std::istringstream ss(line);
    std::string rec;
    while (ss >> rec) {
      const auto dash = rec.find('-');
      if (dash == std::string::npos || dash == 0 || dash + 1 == rec.size()) {
        throw std::runtime_error("malformed alignment record: " + rec);
      }
      int i = 0, j = 0;
      try {
        i = std::stoi(rec.substr(0, dash));
        j = std::stoi(rec.substr(dash + 1));
      } catch (const std::exception&) {
        throw std::runtime_error("malformed alignment record: " + rec);
      }
      if (i < 1 || j < 1) throw std::runtime_error("alignment indices are 1-based: " + rec);
      align.emplace_back(i, j);
    }
    std::sort(align.begin(), align.end());
    align.erase(std::unique(align.begin(), align.end()), align.end());
    out.push_back(std::move(align));
  }
  return out;
}

void write_alignments(const std::string& path,
                      const std::vector<std::optional<Alignment>>& alignments) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  for (const auto& align : alignments) {
    if (align) {
      for (std::size_t i = 0; i < align->size(); ++i) {
        if (i) out << ' ';
        out << (*align)[i].first << '-' << (*align)[i].second;
      }
    }
    out << '\n';
  }
}

static void check_alignment_bounds(const ParallelExample& ex) {
  if (!ex.alignment) return;
  for (const auto& [i, j] : *ex.alignment) {
    if (i < 1 || i > static_cast<int>(ex.source.size()) || j < 1 ||
        j > static_cast<int>(ex.target.size())) {
      throw std::runtime_error("alignment index out of sentence range");
    }
  }
}

ParallelCorpus load_corpus(const std::string& source_path, const std::string& target_path,
                           const std::optional<std::string>& alignment_path) {
  const auto src_lines = read_token_lines(source_path);
  const auto tgt_lines = read_token_lines(target_path);
  const int cap = std::numeric_limits<int>::max();
  return load_corpus(source_path, target_path, alignment_path,
                     build_vocabulary(src_lines, cap), build_vocabulary(tgt_lines, cap));
}

ParallelCorpus load_corpus(const std::string& source_path, const std::string& target_path,
                           const std::optional<std::string>& alignment_path,
                           const Vocabulary& source_vocab, const Vocabulary& target_vocab) {
  const auto src_lines = read_token_lines(source_path);
  const auto tgt_lines = read_token_lines(target_path);
  if (src_lines.size() != tgt_lines.size()) {
    throw std::runtime_error("line-count mismatch between source and target files");
  }
  std::vector<Alignment> aligns;
  if (alignment_path) {
    aligns = read_alignments(*alignment_path);
    if (aligns.size() != src_lines.size()) {
      throw std::runtime_error("line-count mismatch between corpus and alignment files");
    }
  }

  ParallelCorpus corpus;
  corpus.source_vocab = source_vocab;
  corpus.target_vocab = target_vocab;
  corpus.examples.reserve(src_lines.size());
  for (std::size_t n = 0; n < src_lines.size(); ++n) {
    ParallelExample ex;
    ex.source = source_vocab.encode_tokens(src_lines[n]);
    ex.target = target_vocab.encode_tokens(tgt_lines[n]);
    if (alignment_path) ex.alignment = aligns[n];
    check_alignment_bounds(ex);
    corpus.examples.push_back(std::move(ex));
  }
  return corpus;
}

void save_corpus(const ParallelCorpus& corpus, const std::string& source_path,
                 const std::string& target_path,
                 const std::optional<std::string>& alignment_path) {
  std::vector<std::vector<std::string>> src_lines, tgt_lines;
  std::vector<std::optional<Alignment>> aligns;
  src_lines.reserve(corpus.size());
  tgt_lines.reserve(corpus.size());
  for (const auto& ex : corpus.examples) {
    src_lines.push_back(corpus.source_vocab.decode_ids(ex.source));
    tgt_lines.push_back(corpus.target_vocab.decode_ids(ex.target));
    aligns.push_back(ex.alignment);
  }
  write_token_lines(source_path, src_lines);
  write_token_lines(target_path, tgt_lines);
  if (alignment_path) write_alignments(*alignment_path, aligns);
}

bool corpora_equal(const ParallelCorpus& a, const ParallelCorpus& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t n = 0; n < a.size(); ++n) {
    const auto& xa = a.examples[n];
    const auto& xb = b.examples[n];
    if (a.source_vocab.decode_ids(xa.source) != b.source_vocab.decode_ids(xb.source)) return false;
    if (a.target_vocab.decode_ids(xa.target) != b.target_vocab.decode_ids(xb.target)) return false;
    if (xa.alignment.has_value() != xb.alignment.has_value()) return false;
    if (xa.alignment && *xa.alignment != *xb.alignment) return false;
  }
  return true;
}

}  // namespace errsup
