#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "damt/align.hpp"
#include "damt/text.hpp"

namespace damt {

enum class Provenance { domain, bible };

std::string_view provenance_name(Provenance p);

struct LexiconEntry {
  std::string source_form;  // lowercase, non-empty
  std::string target_form;  // lowercase, non-empty; may contain spaces
  Provenance provenance = Provenance::domain;
  std::string lemma;
};

// One translation per source form, by construction: insert refuses to
// overwrite, which is exactly the no-replace merge rule.
class Lexicon {
 public:
  bool insert(LexiconEntry entry);  // false when the source form is taken
  std::optional<std::string> lookup(std::string_view token) const;
  bool contains(std::string_view source_form) const;

  std::size_t size() const { return entries_.size(); }
  std::size_t count(Provenance p) const;
  const std::map<std::string, LexiconEntry>& entries() const {
    return entries_;
  }

 private:
  std::map<std::string, LexiconEntry> entries_;  // key == entry.source_form
};

class Lemmatizer {
 public:
  virtual ~Lemmatizer() = default;
  virtual std::string lemma_of(const std::string& form) const = 0;
  virtual std::string name() const = 0;
};

// Each surface form is its own lemma; the language-agnostic default.
class IdentityLemmatizer final : public Lemmatizer {
 public:
  std::string lemma_of(const std::string& form) const override { return form; }
  std::string name() const override { return "identity"; }
};

// TSV "form<TAB>lemma" table; unlisted forms fall back to identity.
class TableLemmatizer final : public Lemmatizer {
 public:
  explicit TableLemmatizer(std::map<std::string, std::string> table)
      : table_(std::move(table)) {}
  std::string lemma_of(const std::string& form) const override;
  std::string name() const override { return "table"; }

 private:
  std::map<std::string, std::string> table_;
};

std::unique_ptr<Lemmatizer> load_lemma_table(const std::string& path);

struct FrequentLemma {
  std::string lemma;
  std::vector<std::string> forms;  // all observed forms, sorted
  std::uint64_t frequency = 0;     // summed over forms
};

struct FrequentExtraction {
  std::vector<FrequentLemma> lemmas;
  // Lemmas beyond n_lemmas kept because they tie the boundary frequency.
  std::size_t boundary_ties_included = 0;
};

// Ranks lemmas by summed form frequency (ties lexicographic) and keeps the
// top n_lemmas, extending through any frequency tie at the boundary.
FrequentExtraction extract_frequent(const Corpus& corpus,
                                    const Lemmatizer& lemmatizer,
                                    std::size_t n_lemmas = 5000);

class TranslationClient;

struct DomainLexiconBuild {
  Lexicon lexicon;
  std::vector<std::string> skipped_forms;  // per-form failures, in rank order
};

// Translates every inflected form as its own key (provenance domain).  Forms
// the client fails on are skipped and reported; transport failure aborts.
DomainLexiconBuild build_domain_lexicon(const FrequentExtraction& frequent,
                                        TranslationClient& client,
                                        const std::string& source_lang,
                                        const std::string& target_lang);

// Adds harvested pairs whose source is absent from domain (provenance bible,
// lemma = source form); never alters an existing entry.
Lexicon merge_bible(const Lexicon& domain,
                    const std::vector<HarvestedPair>& harvested);

// TSV "source<TAB>target<TAB>provenance<TAB>lemma", sorted by source.
void save_lexicon_tsv(const Lexicon& lexicon, const std::string& path);
Lexicon load_lexicon_tsv(const std::string& path);

}  // namespace damt
