#include "damt/text.hpp"

#include "damt/kernels.hpp"
#include "damt/unicode.hpp"

namespace damt {

std::string Sentence::joined() const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

Sentence normalize_line(std::string_view line) {
  Sentence s;
  s.raw.assign(line);
  const auto decoded = uni::decode_utf8(line);
  std::string token;
  for (char32_t cp : decoded.codepoints) {
    if (uni::is_whitespace(cp)) {
      if (!token.empty()) {
        s.tokens.push_back(std::move(token));
        token.clear();
      }
    } else {
      uni::append_utf8(token, uni::to_lower(cp));
    }
  }
  if (!token.empty()) s.tokens.push_back(std::move(token));
  return s;
}

Sentence sentence_from_tokens(std::vector<std::string> tokens) {
  Sentence s;
  s.tokens = std::move(tokens);
  s.raw = s.joined();
  return s;
}

std::vector<std::string> CharacterTokenizer::tokenize(const Sentence& s) const {
  std::vector<std::string> out;
  for (const auto& tok : s.tokens) {
    const auto decoded = uni::decode_utf8(tok);
    for (char32_t cp : decoded.codepoints) {
      std::string c;
      uni::append_utf8(c, cp);
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::unique_ptr<Tokenizer> make_tokenizer(const std::string& name) {
  if (name.empty() || name == "whitespace") {
    return std::make_unique<WhitespaceTokenizer>();
  }
  if (name == "chars") return std::make_unique<CharacterTokenizer>();
  return nullptr;
}

CorpusStats corpus_stats(const std::vector<Sentence>& sentences,
                         const Tokenizer& tokenizer) {
  CorpusStats stats;
  stats.count = sentences.size();
  if (sentences.empty()) return stats;
  std::vector<double> words, toks, chars;
  words.reserve(sentences.size());
  toks.reserve(sentences.size());
  chars.reserve(sentences.size());
  for (const Sentence& s : sentences) {
    words.push_back(static_cast<double>(s.tokens.size()));
    toks.push_back(static_cast<double>(tokenizer.tokenize(s).size()));
    chars.push_back(static_cast<double>(uni::codepoint_count(s.raw)));
  }
  const auto& k = kernels::active_kernels();
  const double n = static_cast<double>(sentences.size());
  stats.avg_words = k.block_sum(words.data(), words.size()) / n;
  stats.avg_tokens = k.block_sum(toks.data(), toks.size()) / n;
  stats.avg_chars = k.block_sum(chars.data(), chars.size()) / n;
  return stats;
}

}  // namespace damt
