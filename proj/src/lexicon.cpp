#include "damt/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>

#include "damt/errors.hpp"
#include "damt/strconv.hpp"
#include "damt/translate.hpp"
#include "damt/unicode.hpp"

namespace damt {

std::string_view provenance_name(Provenance p) {
  return p == Provenance::domain ? "domain" : "bible";
}

bool Lexicon::insert(LexiconEntry entry) {
  if (entry.source_form.empty() || entry.target_form.empty())
    throw DataError("lexicon entry with an empty side: '" + entry.source_form +
                    "' -> '" + entry.target_form + "'");
  auto key = entry.source_form;
  return entries_.emplace(std::move(key), std::move(entry)).second;
}

std::optional<std::string> Lexicon::lookup(std::string_view token) const {
  auto it = entries_.find(uni::lowercase_utf8(token));
  if (it == entries_.end()) return std::nullopt;
  return it->second.target_form;
}

bool Lexicon::contains(std::string_view source_form) const {
  return entries_.count(std::string(source_form)) > 0;
}

std::size_t Lexicon::count(Provenance p) const {
  std::size_t n = 0;
  for (const auto& [key, entry] : entries_)
    if (entry.provenance == p) ++n;
  return n;
}

std::string TableLemmatizer::lemma_of(const std::string& form) const {
  auto it = table_.find(form);
  return it == table_.end() ? form : it->second;
}

std::unique_ptr<Lemmatizer> load_lemma_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path);
  std::map<std::string, std::string> table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_tab(line);
    if (fields.size() != 2)
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected 2 tab-separated fields");
    table.emplace(std::string(fields[0]), std::string(fields[1]));
  }
  return std::make_unique<TableLemmatizer>(std::move(table));
}

FrequentExtraction extract_frequent(const Corpus& corpus,
                                    const Lemmatizer& lemmatizer,
                                    std::size_t n_lemmas) {
  if (corpus.sentences.empty())
    throw DataError("extract_frequent: empty corpus");
  if (n_lemmas == 0) throw ConfigError("extract_frequent: n_lemmas must be >= 1");

  std::unordered_map<std::string, std::uint64_t> form_freq;
  for (const auto& s : corpus.sentences)
    for (const auto& tok : s.tokens) ++form_freq[tok];

  std::map<std::string, FrequentLemma> by_lemma;
  for (const auto& [form, freq] : form_freq) {
    auto& fl = by_lemma[lemmatizer.lemma_of(form)];
    fl.forms.push_back(form);
    fl.frequency += freq;
  }

  std::vector<FrequentLemma> ranked;
  ranked.reserve(by_lemma.size());
  for (auto& [lemma, fl] : by_lemma) {
    fl.lemma = lemma;
    std::sort(fl.forms.begin(), fl.forms.end());
    ranked.push_back(std::move(fl));
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    return a.lemma < b.lemma;
  });

  FrequentExtraction out;
  if (ranked.size() <= n_lemmas) {
    out.lemmas = std::move(ranked);
    return out;
  }
  std::size_t cut = n_lemmas;
  const std::uint64_t boundary = ranked[n_lemmas - 1].frequency;
  while (cut < ranked.size() && ranked[cut].frequency == boundary) {
    ++cut;
    ++out.boundary_ties_included;
  }
  ranked.resize(cut);
  out.lemmas = std::move(ranked);
  return out;
}

DomainLexiconBuild build_domain_lexicon(const FrequentExtraction& frequent,
                                        TranslationClient& client,
                                        const std::string& source_lang,
                                        const std::string& target_lang) {
  if (frequent.lemmas.empty())
    throw DataError("build_domain_lexicon: no lemmas to translate");

  // Forms go to the client in rank order, each known under its lemma.
  std::vector<std::string> forms;
  std::unordered_map<std::string, std::string> lemma_of;
  for (const auto& fl : frequent.lemmas) {
    for (const auto& form : fl.forms) {
      if (lemma_of.emplace(form, fl.lemma).second) forms.push_back(form);
    }
  }

  auto translations = client.translate(forms, source_lang, target_lang);

  DomainLexiconBuild build;
  for (const auto& form : forms) {
    auto it = translations.find(form);
    if (it == translations.end()) {
      build.skipped_forms.push_back(form);
      continue;
    }
    // Normalize the service's output: lowercase, collapse whitespace; a
    // multi-word translation stays one target string.
    auto norm = normalize_line(it->second);
    if (norm.empty()) {
      build.skipped_forms.push_back(form);
      continue;
    }
    LexiconEntry entry;
    entry.source_form = form;
    entry.target_form = norm.joined();
    entry.provenance = Provenance::domain;
    entry.lemma = lemma_of[form];
    build.lexicon.insert(std::move(entry));
  }
  return build;
}

Lexicon merge_bible(const Lexicon& domain,
                    const std::vector<HarvestedPair>& harvested) {
  Lexicon merged = domain;
  for (const auto& hp : harvested) {
    if (merged.contains(hp.source)) continue;  // never overwrite domain
    LexiconEntry entry;
    entry.source_form = hp.source;
    entry.target_form = hp.target;
    entry.provenance = Provenance::bible;
    entry.lemma = hp.source;
    merged.insert(std::move(entry));
  }
  return merged;
}

void save_lexicon_tsv(const Lexicon& lexicon, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  for (const auto& [source, entry] : lexicon.entries()) {
    out << source << '\t' << entry.target_form << '\t'
        << provenance_name(entry.provenance) << '\t' << entry.lemma << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

Lexicon load_lexicon_tsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path);
  Lexicon lexicon;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_tab(line);
    if (fields.size() != 4)
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected 4 tab-separated fields");
    LexiconEntry entry;
    entry.source_form = std::string(fields[0]);
    entry.target_form = std::string(fields[1]);
    if (fields[2] == "domain") {
      entry.provenance = Provenance::domain;
    } else if (fields[2] == "bible") {
      entry.provenance = Provenance::bible;
    } else {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": unknown provenance '" + std::string(fields[2]) + "'");
    }
    entry.lemma = std::string(fields[3]);
    if (!lexicon.insert(std::move(entry)))
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": duplicate source form");
  }
  return lexicon;
}

}  // namespace damt
