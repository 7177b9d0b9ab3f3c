#include "coword/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace coword {
namespace fs = std::filesystem;

namespace {

constexpr char32_t kInvalid = 0xFFFD;

// Decodes one code point starting at s[i]; advances i. Malformed bytes
// decode to U+FFFD, which is not a word character.
char32_t next_code_point(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int extra = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    extra = 1;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    extra = 2;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    extra = 3;
    cp = b0 & 0x07;
  } else {
    ++i;
    return kInvalid;
  }
  if (i + extra >= s.size()) {
    i = s.size();
    return kInvalid;
  }
  for (int k = 1; k <= extra; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) {
      i += k;
      return kInvalid;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  i += extra + 1;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Letters and digits. Outside ASCII this is a block-level approximation:
// known punctuation, symbol, space and control blocks are excluded and the
// remaining assigned scripts count as letters.
bool is_word_char(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') ||
           (cp >= '0' && cp <= '9');
  }
  if (cp == kInvalid) return false;
  if (cp < 0xC0) return cp == 0xAA || cp == 0xB5 || cp == 0xBA;
  if (cp == 0xD7 || cp == 0xF7) return false;
  if (cp >= 0x2000 && cp <= 0x2BFF) return false;  // punctuation, symbols
  if (cp >= 0x2E00 && cp <= 0x2E7F) return false;  // supplemental punct.
  if (cp >= 0x3000 && cp <= 0x303F) return false;  // CJK punctuation
  if (cp >= 0xD800 && cp <= 0xF8FF) return false;  // surrogates, private use
  if (cp >= 0xFE10 && cp <= 0xFE6F) return false;  // vertical/small forms
  if (cp >= 0xFF00 && cp <= 0xFF0F) return false;  // fullwidth punct.
  if (cp >= 0xFF1A && cp <= 0xFF20) return false;
  if (cp >= 0xFF3B && cp <= 0xFF40) return false;
  if (cp >= 0xFF5B && cp <= 0xFF65) return false;
  if (cp >= 0xFFF0 && cp <= 0xFFFF) return false;  // specials
  if (cp >= 0x1F000 && cp <= 0x1FAFF) return false;  // emoji, pictographs
  if (cp >= 0xE0000) return false;
  return true;
}

// Simple case folding for ASCII, Latin-1, Latin Extended-A, Greek, Cyrillic.
char32_t to_lower(char32_t cp) {
  if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') ? cp + 32 : cp;
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
  if (cp >= 0x100 && cp <= 0x137) return cp | 1;
  if (cp >= 0x139 && cp <= 0x148) return (cp & 1) ? cp + 1 : cp;
  if (cp >= 0x14A && cp <= 0x177) return cp | 1;
  if (cp == 0x178) return 0xFF;
  if (cp >= 0x179 && cp <= 0x17E) return (cp & 1) ? cp + 1 : cp;
  if (cp >= 0x391 && cp <= 0x3AB && cp != 0x3A2) return cp + 0x20;
  if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
  if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
  return cp;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path.string() + "'");
  return buf.str();
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n\f\v");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\f\v");
  return std::string(s.substr(first, last - first + 1));
}

std::string truncate_code_points(std::string_view s, std::size_t max_len) {
  std::size_t i = 0;
  std::size_t count = 0;
  while (i < s.size() && count < max_len) {
    next_code_point(s, i);
    ++count;
  }
  return std::string(s.substr(0, i));
}

// Truncates labels and disambiguates duplicates with a "~N" suffix that
// stays within the length limit.
void assign_labels(Corpus& corpus) {
  std::set<std::string> used;
  for (auto& doc : corpus) {
    std::string base = truncate_code_points(doc.label, kMaxLabelLength);
    if (base.empty()) base = truncate_code_points(doc.id, kMaxLabelLength);
    std::string label = base;
    for (int n = 2; used.count(label) != 0; ++n) {
      const std::string suffix = "~" + std::to_string(n);
      label = truncate_code_points(base, kMaxLabelLength - suffix.size()) +
              suffix;
    }
    used.insert(label);
    doc.label = std::move(label);
  }
}

}  // namespace

std::size_t utf8_length(std::string_view s) {
  std::size_t i = 0;
  std::size_t count = 0;
  while (i < s.size()) {
    next_code_point(s, i);
    ++count;
  }
  return count;
}

Corpus load_corpus(const fs::path& source, CorpusFormat format) {
  Corpus corpus;
  std::error_code ec;
  if (format == CorpusFormat::OnePerFile) {
    if (!fs::is_directory(source, ec))
      throw IoError("cannot read directory '" + source.string() + "'");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(source, ec)) {
      const auto name = entry.path().filename().string();
      if (name.empty() || name.front() == '.') continue;
      if (entry.is_regular_file()) files.push_back(entry.path());
    }
    if (ec) throw IoError("cannot list '" + source.string() + "': " + ec.message());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      const auto name = f.filename().string();
      corpus.push_back({name, name, read_file(f)});
    }
  } else {
    if (!fs::is_regular_file(source, ec))
      throw IoError("cannot read file '" + source.string() + "'");
    std::istringstream lines(read_file(source));
    std::string line;
    for (std::size_t lineno = 1; std::getline(lines, line); ++lineno) {
      std::string text = trim(line);
      if (text.empty()) continue;
      corpus.push_back({std::to_string(lineno), text, text});
    }
  }
  if (corpus.empty())
    throw DataError("empty corpus: no documents in '" + source.string() + "'");
  assign_labels(corpus);
  return corpus;
}

std::vector<std::string> split_words(std::string_view text, bool lowercase) {
  std::vector<std::string> words;
  std::string current;
  std::size_t i = 0;
  while (i < text.size()) {
    char32_t cp = next_code_point(text, i);
    if (is_word_char(cp)) {
      append_utf8(current, lowercase ? to_lower(cp) : cp);
    } else if (!current.empty()) {
      words.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

void TokenizerConfig::validate() const {
  if (min_token_length < 1)
    throw UsageError("min_token_length must be >= 1");
  for (const auto& w : stopwords) {
    if (split_words(w, true) != std::vector<std::string>{w})
      throw UsageError("stopword '" + w + "' is not a lowercase single token");
  }
  for (const auto& [variant, canonical] : synonyms) {
    if (split_words(canonical, lowercase) != std::vector<std::string>{canonical})
      throw UsageError("synonym target '" + canonical +
                       "' is not a single token");
    if (synonyms.count(canonical) != 0)
      throw UsageError("synonym chain not resolved at '" + variant + "'");
  }
}

const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> words = {
      "a", "about", "above", "after", "again", "against", "all", "also", "am",
      "an", "and", "any", "are", "as", "at", "be", "because", "been",
      "before", "being", "below", "between", "both", "but", "by", "can",
      "could", "did", "do", "does", "doing", "down", "during", "each", "et",
      "few", "for", "from", "further", "had", "has", "have", "having", "he",
      "her", "here", "hers", "herself", "him", "himself", "his", "how", "i",
      "if", "in", "into", "is", "it", "its", "itself", "just", "may", "me",
      "might", "more", "most", "must", "my", "myself", "no", "nor", "not",
      "now", "of", "off", "on", "once", "only", "or", "other", "our", "ours",
      "ourselves", "out", "over", "own", "same", "she", "should", "so",
      "some", "such", "than", "that", "the", "their", "theirs", "them",
      "themselves", "then", "there", "these", "they", "this", "those",
      "through", "to", "too", "under", "until", "up", "upon", "very", "was",
      "we", "were", "what", "when", "where", "which", "while", "who", "whom",
      "why", "will", "with", "within", "without", "would", "you", "your",
      "yours", "yourself", "yourselves"};
  return words;
}

TokenizerConfig default_tokenizer_config() {
  TokenizerConfig cfg;
  cfg.stopwords = default_stopwords();
  return cfg;
}

std::set<std::string> load_stopwords(const fs::path& path) {
  std::set<std::string> words;
  std::istringstream in(read_file(path));
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    std::string w = trim(line);
    if (w.empty() || w.front() == '#') continue;
    if (split_words(w, true) != std::vector<std::string>{w})
      throw UsageError(path.string() + ":" + std::to_string(lineno) +
                       ": stopword '" + w + "' is not a lowercase single token");
    words.insert(std::move(w));
  }
  return words;
}

std::map<std::string, std::string> load_synonyms(const fs::path& path) {
  std::map<std::string, std::string> raw;
  std::istringstream in(read_file(path));
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw UsageError(path.string() + ":" + std::to_string(lineno) +
                       ": expected 'variant<TAB>canonical'");
    std::string variant = trim(line.substr(0, tab));
    std::string canonical = trim(line.substr(tab + 1));
    if (variant.empty() || canonical.empty())
      throw UsageError(path.string() + ":" + std::to_string(lineno) +
                       ": empty synonym field");
    raw[variant] = canonical;
  }
  std::map<std::string, std::string> resolved;
  for (const auto& [variant, first] : raw) {
    std::string target = first;
    std::set<std::string> seen{variant};
    while (raw.count(target) != 0) {
      if (!seen.insert(target).second)
        throw UsageError("synonym cycle involving '" + variant + "'");
      target = raw.at(target);
    }
    if (target != variant) resolved[variant] = target;
  }
  return resolved;
}

std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizerConfig& cfg) {
  std::vector<std::string> out;
  for (auto& word : split_words(text, cfg.lowercase)) {
    if (auto it = cfg.synonyms.find(word); it != cfg.synonyms.end())
      word = it->second;
    if (utf8_length(word) < cfg.min_token_length) continue;
    if (cfg.stopwords.count(word) != 0) continue;
    out.push_back(std::move(word));
  }
  return out;
}

std::vector<std::string> tokenize(const Document& doc,
                                  const TokenizerConfig& cfg) {
  return tokenize(doc.text, cfg);
}

TokenizedCorpus tokenize_corpus(const Corpus& corpus,
                                const TokenizerConfig& cfg, unsigned threads) {
  cfg.validate();
  TokenizedCorpus out(corpus.size());
  parallel_for(corpus.size(), threads,
               [&](std::size_t i) { out[i] = tokenize(corpus[i], cfg); });
  return out;
}

std::vector<std::string> Vocabulary::terms() const {
  std::vector<std::string> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.term);
  return out;
}

Vocabulary build_vocabulary(const TokenizedCorpus& docs) {
  std::map<std::string, VocabularyEntry> counts;
  for (const auto& doc : docs) {
    std::set<std::string_view> seen;
    for (const auto& tok : doc) {
      auto& entry = counts[tok];
      entry.term = tok;
      ++entry.total_freq;
      if (seen.insert(tok).second) ++entry.doc_freq;
    }
  }
  if (counts.empty())
    throw DataError("vocabulary is empty after tokenization and stopword filtering");
  Vocabulary vocab;
  vocab.entries.reserve(counts.size());
  for (auto& [term, entry] : counts) vocab.entries.push_back(std::move(entry));
  std::stable_sort(vocab.entries.begin(), vocab.entries.end(),
                   [](const VocabularyEntry& x, const VocabularyEntry& y) {
                     return x.total_freq > y.total_freq;
                   });
  return vocab;
}

Vocabulary build_vocabulary(const Corpus& corpus, const TokenizerConfig& cfg) {
  if (corpus.empty()) throw DataError("empty corpus");
  return build_vocabulary(tokenize_corpus(corpus, cfg));
}

WordDocMatrix WordDocMatrix::from_counts(CountMatrix counts,
                                         std::vector<std::string> row_labels,
                                         std::vector<std::string> col_labels) {
  if (static_cast<std::size_t>(counts.rows()) != row_labels.size() ||
      static_cast<std::size_t>(counts.cols()) != col_labels.size())
    throw DataError("matrix shape does not match its labels");
  if ((counts.array() < 0).any())
    throw DataError("word-document counts must be nonnegative");

  WordDocMatrix m;
  std::vector<char> keep_row(row_labels.size(), 1);
  std::vector<char> keep_col(col_labels.size(), 1);
  // Dropping a row can zero a column only if the row was all-zero, so one
  // pass per axis reaches the fixed point.
  for (Eigen::Index i = 0; i < counts.rows(); ++i) {
    if (counts.row(i).sum() == 0) {
      keep_row[i] = 0;
      m.pruning_.rows.push_back(row_labels[i]);
    }
  }
  for (Eigen::Index k = 0; k < counts.cols(); ++k) {
    if (counts.col(k).sum() == 0) {
      keep_col[k] = 0;
      m.pruning_.cols.push_back(col_labels[k]);
    }
  }
  std::vector<Eigen::Index> rows, cols;
  for (std::size_t i = 0; i < keep_row.size(); ++i)
    if (keep_row[i]) rows.push_back(static_cast<Eigen::Index>(i));
  for (std::size_t k = 0; k < keep_col.size(); ++k)
    if (keep_col[k]) cols.push_back(static_cast<Eigen::Index>(k));
  if (rows.empty() || cols.empty())
    throw DataError("word-document matrix is empty after pruning zero margins");

  m.counts_ = counts(rows, cols);
  for (auto i : rows) m.row_labels_.push_back(std::move(row_labels[i]));
  for (auto k : cols) m.col_labels_.push_back(std::move(col_labels[k]));
  m.row_margins_.resize(rows.size());
  m.col_margins_.resize(cols.size());
  for (Eigen::Index i = 0; i < m.counts_.rows(); ++i)
    m.row_margins_[i] = m.counts_.row(i).sum();
  for (Eigen::Index k = 0; k < m.counts_.cols(); ++k)
    m.col_margins_[k] = m.counts_.col(k).sum();
  for (auto r : m.row_margins_) m.total_ += r;
  return m;
}

std::vector<std::int64_t> WordDocMatrix::doc_freqs() const {
  std::vector<std::int64_t> df(cols(), 0);
  for (Eigen::Index k = 0; k < counts_.cols(); ++k)
    df[k] = (counts_.col(k).array() > 0).count();
  return df;
}

WordDocMatrix WordDocMatrix::select_columns(
    const std::vector<std::string>& terms) const {
  std::unordered_map<std::string, Eigen::Index> index;
  for (std::size_t k = 0; k < col_labels_.size(); ++k)
    index.emplace(col_labels_[k], static_cast<Eigen::Index>(k));
  std::vector<Eigen::Index> cols;
  for (const auto& t : terms) {
    auto it = index.find(t);
    if (it == index.end())
      throw DataError("term '" + t + "' is not in the word-document matrix");
    cols.push_back(it->second);
  }
  return from_counts(counts_(Eigen::all, cols), row_labels_, terms);
}

WordDocMatrix WordDocMatrix::binarized() const {
  CountMatrix b = (counts_.array() > 0).cast<std::int64_t>();
  return from_counts(std::move(b), row_labels_, col_labels_);
}

LabeledMatrix WordDocMatrix::as_real() const {
  return {counts_.cast<double>(), row_labels_, col_labels_};
}

WordDocMatrix build_word_doc_matrix(const Corpus& corpus,
                                    const TokenizedCorpus& docs,
                                    const Vocabulary& vocab) {
  if (corpus.size() != docs.size())
    throw DataError("tokenized corpus does not match the corpus");
  std::unordered_map<std::string, Eigen::Index> index;
  for (std::size_t k = 0; k < vocab.size(); ++k)
    index.emplace(vocab.entries[k].term, static_cast<Eigen::Index>(k));
  CountMatrix counts = CountMatrix::Zero(static_cast<Eigen::Index>(docs.size()),
                                         static_cast<Eigen::Index>(vocab.size()));
  for (std::size_t i = 0; i < docs.size(); ++i) {
    for (const auto& tok : docs[i]) {
      if (auto it = index.find(tok); it != index.end())
        ++counts(static_cast<Eigen::Index>(i), it->second);
    }
  }
  std::vector<std::string> rows;
  rows.reserve(corpus.size());
  for (const auto& d : corpus) rows.push_back(d.label);
  return WordDocMatrix::from_counts(std::move(counts), std::move(rows),
                                    vocab.terms());
}

WordDocMatrix build_word_doc_matrix(const Corpus& corpus,
                                    const TokenizerConfig& cfg,
                                    const Vocabulary& vocab) {
  return build_word_doc_matrix(corpus, tokenize_corpus(corpus, cfg), vocab);
}

}  // namespace coword
