#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "damt/errors.hpp"
#include "damt/lexicon.hpp"
#include "damt/rng.hpp"
#include "damt/text.hpp"
#include "damt/translate.hpp"

using namespace damt;
namespace fs = std::filesystem;

namespace {

Corpus corpus_from(const std::vector<std::string>& lines) {
  Corpus c;
  for (const auto& line : lines) {
    auto s = normalize_line(line);
    if (!s.empty()) c.sentences.push_back(std::move(s));
  }
  return c;
}

fs::path temp_file(const std::string& name, const std::string& content) {
  auto path = fs::temp_directory_path() / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("identity extraction counts surface forms") {
  auto c = corpus_from({"a a b"});
  IdentityLemmatizer id;
  auto ex = extract_frequent(c, id, 5000);
  REQUIRE(ex.lemmas.size() == 2);
  CHECK(ex.lemmas[0].lemma == "a");
  CHECK(ex.lemmas[0].forms == std::vector<std::string>{"a"});
  CHECK(ex.lemmas[0].frequency == 2);
  CHECK(ex.lemmas[1].lemma == "b");
  CHECK(ex.lemmas[1].frequency == 1);
  CHECK(ex.boundary_ties_included == 0);
}

TEST_CASE("lemma table groups inflections") {
  auto path = temp_file("damt_lemmas.tsv", "runs\trun\nrunning\trun\n");
  auto lem = load_lemma_table(path.string());
  auto c = corpus_from({"run runs running walk"});
  auto ex = extract_frequent(c, *lem, 5000);
  REQUIRE(ex.lemmas.size() == 2);
  CHECK(ex.lemmas[0].lemma == "run");
  CHECK(ex.lemmas[0].frequency == 3);
  CHECK(ex.lemmas[0].forms ==
        std::vector<std::string>{"run", "running", "runs"});
  CHECK(ex.lemmas[1].lemma == "walk");
  fs::remove(path);
}

TEST_CASE("extraction never pads and breaks ties lexicographically") {
  auto c = corpus_from({"z z q q m"});
  IdentityLemmatizer id;
  auto ex = extract_frequent(c, id, 5000);
  REQUIRE(ex.lemmas.size() == 3);
  CHECK(ex.lemmas[0].lemma == "q");  // ties with z, lexicographically first
  CHECK(ex.lemmas[1].lemma == "z");
  CHECK(ex.lemmas[2].lemma == "m");
}

TEST_CASE("boundary frequency ties are all included and counted") {
  auto c = corpus_from({"a a a", "b b", "c c", "d d", "e"});
  IdentityLemmatizer id;
  auto ex = extract_frequent(c, id, 2);
  // Cut falls inside the freq-2 group {b, c, d}: all three kept.
  REQUIRE(ex.lemmas.size() == 4);
  CHECK(ex.lemmas[0].lemma == "a");
  CHECK(ex.lemmas[3].lemma == "d");
  CHECK(ex.boundary_ties_included == 2);

  auto ex_all = extract_frequent(c, id, 5);
  CHECK(ex_all.lemmas.size() == 5);
  CHECK(ex_all.boundary_ties_included == 0);
}

TEST_CASE("extraction is deterministic") {
  auto c = corpus_from({"m n o p q r", "r q p o n m", "m r"});
  IdentityLemmatizer id;
  auto a = extract_frequent(c, id, 4);
  auto b = extract_frequent(c, id, 4);
  REQUIRE(a.lemmas.size() == b.lemmas.size());
  for (std::size_t i = 0; i < a.lemmas.size(); ++i) {
    CHECK(a.lemmas[i].lemma == b.lemmas[i].lemma);
    CHECK(a.lemmas[i].frequency == b.lemmas[i].frequency);
    CHECK(a.lemmas[i].forms == b.lemmas[i].forms);
  }
  CHECK_THROWS_AS(extract_frequent(Corpus{}, id, 10), DataError);
}

TEST_CASE("lexicon holds one translation per source and normalizes lookups") {
  Lexicon lex;
  CHECK(lex.insert({"eye", "g\xC4\xA7""ajn", Provenance::domain, "eye"}));
  CHECK(!lex.insert({"eye", "okhju", Provenance::bible, "eye"}));
  CHECK(lex.size() == 1);
  CHECK(*lex.lookup("eye") == "g\xC4\xA7""ajn");
  CHECK(*lex.lookup("EYE") == "g\xC4\xA7""ajn");
  CHECK(!lex.lookup("unseen").has_value());
  CHECK(lex.count(Provenance::domain) == 1);
  CHECK(lex.count(Provenance::bible) == 0);
  CHECK_THROWS_AS(lex.insert({"", "x", Provenance::domain, ""}), DataError);
}

TEST_CASE("stub client builds a domain lexicon and reports skips") {
  auto path = temp_file("damt_stub.tsv",
                        "eye\tg\xC4\xA7""ajn\n"
                        "hand\tId\n"
                        "walk\tJimxi Sew\n");
  auto client = make_stub_client(path.string());
  auto c = corpus_from({"eye hand walk missing eye"});
  IdentityLemmatizer id;
  auto ex = extract_frequent(c, id, 5000);
  auto build = build_domain_lexicon(ex, *client, "en", "mt");

  CHECK(build.lexicon.size() == 3);
  CHECK(*build.lexicon.lookup("eye") == "g\xC4\xA7""ajn");
  CHECK(*build.lexicon.lookup("hand") == "id");         // lowercased
  CHECK(*build.lexicon.lookup("walk") == "jimxi sew");  // multi-word kept
  REQUIRE(build.skipped_forms.size() == 1);
  CHECK(build.skipped_forms[0] == "missing");
  for (const auto& [k, e] : build.lexicon.entries())
    CHECK(e.provenance == Provenance::domain);

  CHECK_THROWS_AS(build_domain_lexicon(FrequentExtraction{}, *client, "en", "mt"),
                  DataError);
  fs::remove(path);
}

TEST_CASE("merge_bible never overwrites and counts additions") {
  Lexicon domain;
  domain.insert({"eye", "g\xC4\xA7""ajn", Provenance::domain, "eye"});
  domain.insert({"hand", "id", Provenance::domain, "hand"});

  std::vector<HarvestedPair> harvested = {
      {"eye", "okhju", 5}, {"lord", "mulej", 12}, {"god", "alla", 30}};
  auto merged = merge_bible(domain, harvested);

  CHECK(merged.size() == 4);
  CHECK(*merged.lookup("eye") == "g\xC4\xA7""ajn");  // untouched
  CHECK(*merged.lookup("lord") == "mulej");
  CHECK(merged.count(Provenance::domain) == 2);
  CHECK(merged.count(Provenance::bible) == 2);
  CHECK(merged.size() - domain.size() == 2);  // sources absent from domain
  const auto& eye = merged.entries().at("eye");
  CHECK(eye.provenance == Provenance::domain);
}

TEST_CASE("merge accounting holds under random overlap") {
  for (int trial = 0; trial < 200; ++trial) {
    auto stream = derive_stream(static_cast<std::uint64_t>(trial), "merge-prop");
    Lexicon domain;
    const std::size_t n_domain = 1 + stream.next_below(40);
    for (std::size_t i = 0; i < n_domain; ++i) {
      domain.insert({"w" + std::to_string(stream.next_below(60)),
                     "d" + std::to_string(i), Provenance::domain, "l"});
    }
    std::vector<HarvestedPair> harvested;
    const std::size_t n_harv = stream.next_below(40);
    for (std::size_t i = 0; i < n_harv; ++i) {
      harvested.push_back({"w" + std::to_string(stream.next_below(60)),
                           "b" + std::to_string(i), 1 + stream.next_below(9)});
    }
    auto merged = merge_bible(domain, harvested);

    std::set<std::string> new_sources;
    for (const auto& hp : harvested)
      if (!domain.contains(hp.source)) new_sources.insert(hp.source);
    CHECK(merged.size() == domain.size() + new_sources.size());
    CHECK(merged.count(Provenance::bible) == new_sources.size());
    for (const auto& [key, entry] : domain.entries()) {
      const auto& m = merged.entries().at(key);
      CHECK(m.target_form == entry.target_form);
      CHECK(m.provenance == entry.provenance);
    }
  }
}

TEST_CASE("lexicon TSV round-trips sorted by source") {
  Lexicon lex;
  lex.insert({"zebra", "zebra t", Provenance::bible, "zebra"});
  lex.insert({"apple", "tuffieha", Provenance::domain, "apple"});
  auto path = (fs::temp_directory_path() / "damt_lex.tsv").string();
  save_lexicon_tsv(lex, path);

  std::ifstream in(path);
  std::string l1, l2;
  std::getline(in, l1);
  std::getline(in, l2);
  CHECK(l1 == "apple\ttuffieha\tdomain\tapple");
  CHECK(l2 == "zebra\tzebra t\tbible\tzebra");

  auto back = load_lexicon_tsv(path);
  CHECK(back.size() == 2);
  CHECK(*back.lookup("apple") == "tuffieha");
  CHECK(back.entries().at("zebra").provenance == Provenance::bible);
  fs::remove(path);

  auto bad = temp_file("damt_lex_bad.tsv", "a\tb\tnope\ta\n");
  CHECK_THROWS_AS(load_lexicon_tsv(bad.string()), DataError);
  fs::remove(bad);
}

TEST_CASE("http client speaks the endpoint protocol") {
  httplib::Server srv;
  std::atomic<int> requests{0};
  std::string seen_auth;
  srv.Post("/translate", [&](const httplib::Request& req,
                             httplib::Response& res) {
    ++requests;
    if (req.has_header("Authorization"))
      seen_auth = req.get_header_value("Authorization");
    auto body = nlohmann::json::parse(req.body);
    nlohmann::json reply;
    reply["translations"] = nlohmann::json::array();
    for (const auto& text : body["texts"]) {
      auto s = text.get<std::string>();
      if (s == "fail") {
        reply["translations"].push_back("");  // per-form failure
      } else {
        reply["translations"].push_back(s + "_tr");
      }
    }
    res.set_content(reply.dump(), "application/json");
  });
  const int port = srv.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread server([&] { srv.listen_after_bind(); });
  srv.wait_until_ready();

  setenv("DAMT_TEST_KEY", "sekrit", 1);
  RemoteClientConfig cfg;
  cfg.endpoint_url = "http://127.0.0.1:" + std::to_string(port) + "/translate";
  cfg.api_key_env = "DAMT_TEST_KEY";
  cfg.batch_size = 2;
  auto client = make_http_client(cfg);

  auto got = client->translate({"alpha", "beta", "fail", "delta", "echo"},
                               "en", "mt");
  CHECK(requests.load() == 3);  // 5 forms in batches of 2
  CHECK(got.size() == 4);
  CHECK(got.at("alpha") == "alpha_tr");
  CHECK(got.at("echo") == "echo_tr");
  CHECK(got.count("fail") == 0);
  CHECK(seen_auth == "Bearer sekrit");

  RemoteClientConfig no_key = cfg;
  no_key.api_key_env = "DAMT_TEST_KEY_UNSET";
  unsetenv("DAMT_TEST_KEY_UNSET");
  auto client2 = make_http_client(no_key);
  CHECK_THROWS_AS(client2->translate({"x"}, "en", "mt"), ConfigError);

  srv.stop();
  server.join();
}

TEST_CASE("http client surfaces transport failures") {
  httplib::Server srv;
  srv.Post("/translate", [](const httplib::Request&, httplib::Response& res) {
    res.status = 500;
  });
  const int port = srv.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread server([&] { srv.listen_after_bind(); });
  srv.wait_until_ready();

  RemoteClientConfig cfg;
  cfg.endpoint_url = "http://127.0.0.1:" + std::to_string(port) + "/translate";
  auto client = make_http_client(cfg);
  CHECK_THROWS_AS(client->translate({"x"}, "en", "mt"), DataError);

  srv.stop();
  server.join();

  CHECK_THROWS_AS(make_http_client(RemoteClientConfig{"ftp://x/y", "", 128}),
                  ConfigError);
  CHECK_THROWS_AS(make_http_client(RemoteClientConfig{"nourl", "", 128}),
                  ConfigError);
}
