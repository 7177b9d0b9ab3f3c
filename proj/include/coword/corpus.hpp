#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "coword/common.hpp"

namespace coword {

inline constexpr std::size_t kMaxLabelLength = 40;

struct Document {
  std::string id;
  std::string label;
  std::string text;
};

using Corpus = std::vector<Document>;

enum class CorpusFormat { OnePerFile, OnePerLine };

/// Loads a corpus. Directory sources yield one document per regular file
/// (sorted by filename, dot-files skipped); line sources yield one document
/// per non-blank line with the 1-based line number as id. Labels are
/// truncated to 40 code points and made unique.
Corpus load_corpus(const std::filesystem::path& source, CorpusFormat format);

struct TokenizerConfig {
  bool lowercase = true;
  std::size_t min_token_length = 2;
  std::set<std::string> stopwords;
  // variant -> canonical, chains already resolved
  std::map<std::string, std::string> synonyms;

  void validate() const;
};

/// The bundled English stopword list.
const std::set<std::string>& default_stopwords();

TokenizerConfig default_tokenizer_config();

/// One lowercase term per line; blank lines and '#' comments ignored.
std::set<std::string> load_stopwords(const std::filesystem::path& path);

/// `variant<TAB>canonical` per line. Chains (a->b, b->c) are resolved to
/// their terminal term; cycles are rejected.
std::map<std::string, std::string> load_synonyms(
    const std::filesystem::path& path);

/// Splits `text` into maximal runs of letters/digits (UTF-8 aware).
std::vector<std::string> split_words(std::string_view text, bool lowercase);

/// Number of code points in a UTF-8 string.
std::size_t utf8_length(std::string_view s);

std::vector<std::string> tokenize(const Document& doc,
                                  const TokenizerConfig& cfg);
std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizerConfig& cfg);

using TokenizedCorpus = std::vector<std::vector<std::string>>;

TokenizedCorpus tokenize_corpus(const Corpus& corpus,
                                const TokenizerConfig& cfg,
                                unsigned threads = 1);

struct VocabularyEntry {
  std::string term;
  std::int64_t total_freq = 0;
  std::int64_t doc_freq = 0;

  friend bool operator==(const VocabularyEntry&,
                         const VocabularyEntry&) = default;
};

/// Ordered by descending total frequency, ties lexicographic.
struct Vocabulary {
  std::vector<VocabularyEntry> entries;

  std::size_t size() const { return entries.size(); }
  std::vector<std::string> terms() const;
};

Vocabulary build_vocabulary(const TokenizedCorpus& docs);
Vocabulary build_vocabulary(const Corpus& corpus, const TokenizerConfig& cfg);

/// Documents x terms occurrence counts with cached margins. Every instance
/// is pruned: no all-zero row or column survives construction.
class WordDocMatrix {
 public:
  struct Pruning {
    std::vector<std::string> rows;
    std::vector<std::string> cols;
    bool empty() const { return rows.empty() && cols.empty(); }
  };

  /// Builds the matrix and prunes zero-margin rows and columns (repeatedly,
  /// until none remain). Throws DataError if nothing survives.
  static WordDocMatrix from_counts(CountMatrix counts,
                                   std::vector<std::string> row_labels,
                                   std::vector<std::string> col_labels);

  const CountMatrix& counts() const { return counts_; }
  const std::vector<std::int64_t>& row_margins() const { return row_margins_; }
  const std::vector<std::int64_t>& col_margins() const { return col_margins_; }
  std::int64_t total() const { return total_; }
  const std::vector<std::string>& row_labels() const { return row_labels_; }
  const std::vector<std::string>& col_labels() const { return col_labels_; }
  const Pruning& pruning() const { return pruning_; }

  std::size_t rows() const { return static_cast<std::size_t>(counts_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(counts_.cols()); }

  /// Number of rows with a nonzero count in column k.
  std::vector<std::int64_t> doc_freqs() const;

  /// Restricts to the given terms (in that order) and re-prunes.
  WordDocMatrix select_columns(const std::vector<std::string>& terms) const;

  /// Counts clamped to presence/absence.
  WordDocMatrix binarized() const;

  LabeledMatrix as_real() const;

 private:
  CountMatrix counts_;
  std::vector<std::string> row_labels_;
  std::vector<std::string> col_labels_;
  std::vector<std::int64_t> row_margins_;
  std::vector<std::int64_t> col_margins_;
  std::int64_t total_ = 0;
  Pruning pruning_;
};

WordDocMatrix build_word_doc_matrix(const Corpus& corpus,
                                    const TokenizedCorpus& docs,
                                    const Vocabulary& vocab);
WordDocMatrix build_word_doc_matrix(const Corpus& corpus,
                                    const TokenizerConfig& cfg,
                                    const Vocabulary& vocab);

}  // namespace coword
