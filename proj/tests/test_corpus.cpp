#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "damt/corpus_io.hpp"
#include "damt/errors.hpp"
#include "damt/sampling.hpp"
#include "damt/text.hpp"

using namespace damt;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name, const std::string& content) {
  auto path = fs::temp_directory_path() / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

ParallelCorpus synthetic_parallel(std::size_t n) {
  ParallelCorpus c;
  c.source_tag = "src";
  c.target_tag = "tgt";
  c.pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    SentencePair p;
    p.source = normalize_line("s" + std::to_string(i) + " w");
    p.target = normalize_line("t" + std::to_string(i) + " v");
    c.pairs.push_back(std::move(p));
  }
  return c;
}

}  // namespace

TEST_CASE("normalize_line lowercases and splits on unicode whitespace") {
  auto s = normalize_line("  Hello\tWORLD\xC2\xA0\xC3\x89t\xC3\xA9  ");
  REQUIRE(s.tokens.size() == 3);
  CHECK(s.tokens[0] == "hello");
  CHECK(s.tokens[1] == "world");
  CHECK(s.tokens[2] == "\xC3\xA9t\xC3\xA9");
  CHECK(s.joined() == "hello world \xC3\xA9t\xC3\xA9");
  CHECK(s.raw == "  Hello\tWORLD\xC2\xA0\xC3\x89t\xC3\xA9  ");
}

TEST_CASE("normalization is idempotent") {
  std::vector<std::string> lines = {
      "MiXeD Case Text", "  padded   runs  ", "\xD0\x96\xD0\xB8 ZHI",
      "a\tb\xE2\x80\x83g"};
  for (const auto& line : lines) {
    auto once = normalize_line(line);
    auto twice = normalize_line(once.joined());
    CHECK(once.tokens == twice.tokens);
    CHECK(twice.joined() == once.joined());
  }
}

TEST_CASE("empty and whitespace-only lines give empty sentences") {
  CHECK(normalize_line("").empty());
  CHECK(normalize_line("   \t ").empty());
}

TEST_CASE("character tokenizer splits codepoints") {
  auto s = normalize_line("ab \xC3\xA9x");
  CharacterTokenizer tok;
  auto t = tok.tokenize(s);
  std::vector<std::string> want = {"a", "b", "\xC3\xA9", "x"};
  CHECK(t == want);
}

TEST_CASE("make_tokenizer knows its names") {
  CHECK(make_tokenizer("whitespace") != nullptr);
  CHECK(make_tokenizer("chars") != nullptr);
  CHECK(make_tokenizer("nope") == nullptr);
}

TEST_CASE("corpus_stats averages words, tokens and chars") {
  std::vector<Sentence> sents = {normalize_line("ab cd"),
                                 normalize_line("x")};
  WhitespaceTokenizer wtok;
  auto st = corpus_stats(sents, wtok);
  CHECK(st.count == 2);
  CHECK(st.avg_words == doctest::Approx(1.5));
  CHECK(st.avg_tokens == doctest::Approx(1.5));
  CHECK(st.avg_chars == doctest::Approx(3.0));  // "ab cd"=5, "x"=1

  CharacterTokenizer ctok;
  auto st2 = corpus_stats(sents, ctok);
  CHECK(st2.avg_words == doctest::Approx(1.5));
  CHECK(st2.avg_tokens == doctest::Approx(2.5));  // {a,b,c,d}, {x}

  auto st3 = corpus_stats({}, wtok);
  CHECK(st3.count == 0);
  CHECK(st3.avg_words == 0.0);
}

TEST_CASE("load_monolingual skips blanks and normalizes") {
  auto path = temp_file("damt_mono.txt", "One TWO\n\n  \nthree\r\n");
  auto load = load_monolingual(path.string(), "en", "misc");
  CHECK(load.blank_lines_skipped == 2);
  REQUIRE(load.corpus.size() == 2);
  CHECK(load.corpus.sentences[0].joined() == "one two");
  CHECK(load.corpus.sentences[1].joined() == "three");
  fs::remove(path);
}

TEST_CASE("load_monolingual reports the offending line on bad utf-8") {
  auto path = temp_file("damt_bad.txt", "fine\nbad \xC0\xAF here\n");
  try {
    load_monolingual(path.string(), "en", "misc");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    std::string msg = e.what();
    CHECK(msg.find("damt_bad.txt") != std::string::npos);
    CHECK(msg.find("2") != std::string::npos);
  }
  fs::remove(path);
}

TEST_CASE("load_parallel pairs lines and rejects mismatches") {
  auto sp = temp_file("damt_par.src", "A b\nC d\n");
  auto tp = temp_file("damt_par.tgt", "e F\ng H\n");
  auto corpus = load_parallel(sp.string(), tp.string(), "src", "tgt");
  REQUIRE(corpus.size() == 2);
  CHECK(corpus.pairs[1].source.joined() == "c d");
  CHECK(corpus.pairs[1].target.joined() == "g h");

  auto tp3 = temp_file("damt_par3.tgt", "e\ng\nh\n");
  try {
    load_parallel(sp.string(), tp3.string(), "src", "tgt");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    std::string msg = e.what();
    CHECK(msg.find("2 vs 3") != std::string::npos);
  }
  fs::remove(sp);
  fs::remove(tp);
  fs::remove(tp3);
}

TEST_CASE("load_parallel rejects a blank side by pair index") {
  auto sp = temp_file("damt_blank.src", "a\n\nc\n");
  auto tp = temp_file("damt_blank.tgt", "x\ny\nz\n");
  try {
    load_parallel(sp.string(), tp.string(), "src", "tgt");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
  fs::remove(sp);
  fs::remove(tp);
}

TEST_CASE("write + load round-trips normalized text") {
  auto c = synthetic_parallel(7);
  auto sp = fs::temp_directory_path() / "damt_rt.src";
  auto tp = fs::temp_directory_path() / "damt_rt.tgt";
  write_parallel(sp.string(), tp.string(), c);
  auto back = load_parallel(sp.string(), tp.string(), "src", "tgt");
  REQUIRE(back.size() == c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(back.pairs[i].source.tokens == c.pairs[i].source.tokens);
    CHECK(back.pairs[i].target.tokens == c.pairs[i].target.tokens);
  }
  fs::remove(sp);
  fs::remove(tp);
}

TEST_CASE("split_validation sizes follow round(fraction * n)") {
  auto c = synthetic_parallel(7924);
  SplitSpec spec;  // 0.08, seed 42
  auto [train, valid] = split_validation(c, spec);
  CHECK(valid.size() == 634);  // round(0.08 * 7924)
  CHECK(train.size() == 7290);

  auto c2 = synthetic_parallel(100);
  auto [t2, v2] = split_validation(c2, spec);
  CHECK(v2.size() == 8);
  CHECK(t2.size() == 92);
}

TEST_CASE("split_validation partitions and preserves order") {
  auto c = synthetic_parallel(500);
  SplitSpec spec;
  auto [train, valid] = split_validation(c, spec);
  CHECK(train.size() + valid.size() == c.size());

  auto key = [](const SentencePair& p) { return p.source.tokens[0]; };
  // Both halves are subsequences of the original ordering.
  std::vector<std::string> orig;
  for (const auto& p : c.pairs) orig.push_back(key(p));
  auto is_subseq = [&](const ParallelCorpus& part) {
    std::size_t j = 0;
    for (const auto& p : part.pairs) {
      auto it = std::find(orig.begin() + j, orig.end(), key(p));
      if (it == orig.end()) return false;
      j = static_cast<std::size_t>(it - orig.begin()) + 1;
    }
    return true;
  };
  CHECK(is_subseq(train));
  CHECK(is_subseq(valid));

  // Disjoint: counts add up per key.
  std::vector<std::string> merged;
  for (const auto& p : train.pairs) merged.push_back(key(p));
  for (const auto& p : valid.pairs) merged.push_back(key(p));
  std::sort(merged.begin(), merged.end());
  std::sort(orig.begin(), orig.end());
  CHECK(merged == orig);
}

TEST_CASE("split_validation is seed-deterministic") {
  auto c = synthetic_parallel(300);
  SplitSpec a;
  auto [t1, v1] = split_validation(c, a);
  auto [t2, v2] = split_validation(c, a);
  REQUIRE(v1.size() == v2.size());
  for (std::size_t i = 0; i < v1.size(); ++i)
    CHECK(v1.pairs[i].source.tokens == v2.pairs[i].source.tokens);

  SplitSpec b;
  b.seed = 43;
  auto [t3, v3] = split_validation(c, b);
  auto sources = [](const ParallelCorpus& pc) {
    std::vector<std::string> out;
    for (const auto& p : pc.pairs) out.push_back(p.source.joined());
    return out;
  };
  CHECK(sources(v1) != sources(v3));
}

TEST_CASE("sample_cap keeps order and caps size") {
  auto c = synthetic_parallel(100);
  auto capped = sample_cap(c, 30, 42);
  CHECK(capped.size() == 30);

  auto same = sample_cap(c, 100, 42);
  CHECK(same.size() == 100);
  auto bigger = sample_cap(c, 1000, 42);
  CHECK(bigger.size() == 100);

  // Subsequence of original.
  std::size_t j = 0;
  for (const auto& p : capped.pairs) {
    while (j < c.size() && c.pairs[j].source.tokens != p.source.tokens) ++j;
    REQUIRE(j < c.size());
    ++j;
  }
}

TEST_CASE("hold_out_test extracts exactly test_count pairs") {
  auto c = synthetic_parallel(2000);
  SplitSpec spec;
  spec.test_count = 150;
  auto [rest, test] = hold_out_test(c, spec);
  CHECK(test.size() == 150);
  CHECK(rest.size() == 1850);

  SplitSpec too_big;
  too_big.test_count = 2000;
  CHECK_THROWS_AS(hold_out_test(c, too_big), DataError);
}

TEST_CASE("hold_out then cap leaves test pairs untouched") {
  auto c = synthetic_parallel(800);
  SplitSpec spec;
  spec.test_count = 100;
  spec.train_cap = 300;
  auto [rest, test] = hold_out_test(c, spec);
  auto train = sample_cap(rest, spec.train_cap, spec.seed);
  CHECK(train.size() == 300);
  CHECK(test.size() == 100);
  // No train pair appears in the test set.
  auto key = [](const SentencePair& p) { return p.source.tokens[0]; };
  std::vector<std::string> test_keys;
  for (const auto& p : test.pairs) test_keys.push_back(key(p));
  std::sort(test_keys.begin(), test_keys.end());
  for (const auto& p : train.pairs)
    CHECK(!std::binary_search(test_keys.begin(), test_keys.end(), key(p)));
}
