#pragma once

#include <string>

#include "damt/text.hpp"

namespace damt {

struct MonolingualLoad {
  Corpus corpus;
  std::size_t blank_lines_skipped = 0;
};

// One sentence per line, UTF-8, LF endings (trailing newline optional, CR
// stripped).  Blank lines are skipped and counted.  Invalid UTF-8 raises
// DataError naming the line.
MonolingualLoad load_monolingual(const std::string& path,
                                 const std::string& language_tag,
                                 const std::string& domain_tag);

// Line-aligned pair of files.  Line-count mismatch and blank lines are
// errors (blank lines would silently shift the alignment).
ParallelCorpus load_parallel(const std::string& src_path,
                             const std::string& tgt_path,
                             const std::string& source_tag,
                             const std::string& target_tag);

// Writers emit the normalized token join, one sentence per line, LF.
void write_sentences(const std::string& path,
                     const std::vector<Sentence>& sentences);
void write_parallel(const std::string& src_path, const std::string& tgt_path,
                    const ParallelCorpus& corpus);

}  // namespace damt
