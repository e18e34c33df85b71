#include "damt/corpus_io.hpp"

#include <fstream>

#include "damt/errors.hpp"
#include "damt/unicode.hpp"

namespace damt {

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  if (in.bad()) throw DataError("read failure on " + path);
  return lines;
}

void check_utf8(const std::string& line, const std::string& path,
                std::size_t line_no) {
  const auto d = uni::decode_utf8(line);
  if (!d.ok) {
    throw DataError(path + ":" + std::to_string(line_no) +
                    ": invalid UTF-8 byte sequence at byte offset " +
                    std::to_string(d.error_byte));
  }
}

}  // namespace

MonolingualLoad load_monolingual(const std::string& path,
                                 const std::string& language_tag,
                                 const std::string& domain_tag) {
  MonolingualLoad result;
  result.corpus.language_tag = language_tag;
  result.corpus.domain_tag = domain_tag;
  const auto lines = read_lines(path);
  result.corpus.sentences.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    check_utf8(lines[i], path, i + 1);
    Sentence s = normalize_line(lines[i]);
    if (s.empty()) {
      ++result.blank_lines_skipped;
      continue;
    }
    result.corpus.sentences.push_back(std::move(s));
  }
  return result;
}

ParallelCorpus load_parallel(const std::string& src_path,
                             const std::string& tgt_path,
                             const std::string& source_tag,
                             const std::string& target_tag) {
  const auto src_lines = read_lines(src_path);
  const auto tgt_lines = read_lines(tgt_path);
  if (src_lines.size() != tgt_lines.size()) {
    throw DataError("line-count mismatch between " + src_path + " and " +
                    tgt_path + ": " + std::to_string(src_lines.size()) +
                    " vs " + std::to_string(tgt_lines.size()));
  }
  ParallelCorpus corpus;
  corpus.source_tag = source_tag;
  corpus.target_tag = target_tag;
  corpus.pairs.reserve(src_lines.size());
  for (std::size_t i = 0; i < src_lines.size(); ++i) {
    check_utf8(src_lines[i], src_path, i + 1);
    check_utf8(tgt_lines[i], tgt_path, i + 1);
    SentencePair pair{normalize_line(src_lines[i]), normalize_line(tgt_lines[i])};
    if (pair.source.empty()) {
      throw DataError(src_path + ": blank line at index " + std::to_string(i + 1));
    }
    if (pair.target.empty()) {
      throw DataError(tgt_path + ": blank line at index " + std::to_string(i + 1));
    }
    corpus.pairs.push_back(std::move(pair));
  }
  return corpus;
}

void write_sentences(const std::string& path,
                     const std::vector<Sentence>& sentences) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path + " for writing");
  for (const Sentence& s : sentences) {
    out << s.joined() << '\n';
  }
  if (!out) throw DataError("write failure on " + path);
}

void write_parallel(const std::string& src_path, const std::string& tgt_path,
                    const ParallelCorpus& corpus) {
  std::ofstream src(src_path, std::ios::binary);
  std::ofstream tgt(tgt_path, std::ios::binary);
  if (!src || !tgt) {
    throw DataError("cannot open " + src_path + " / " + tgt_path +
                    " for writing");
  }
  for (const SentencePair& p : corpus.pairs) {
    src << p.source.joined() << '\n';
    tgt << p.target.joined() << '\n';
  }
  if (!src || !tgt) {
    throw DataError("write failure on " + src_path + " / " + tgt_path);
  }
}

}  // namespace damt
