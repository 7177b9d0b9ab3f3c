#include "coword/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <functional>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "coword/export.hpp"
#include "coword/layout.hpp"
#include "coword/vectorspace.hpp"

namespace coword {
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "off" || v == "no" || v == "0") return false;
  throw UsageError("invalid value '" + v + "' for " + key +
                   " (valid: true, false, on, off, yes, no, 1, 0)");
}

double parse_real(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
    throw UsageError("invalid number '" + v + "' for " + key);
  return out;
}

long long parse_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw UsageError("invalid integer '" + v + "' for " + key);
  return out;
}

fs::path resolve(const std::string& value, const fs::path& base) {
  if (value.empty()) return {};
  fs::path p(value);
  if (p.is_relative() && !base.empty()) p = base / p;
  return p.lexically_normal();
}

}  // namespace

void PipelineConfig::set(const std::string& key, const std::string& raw,
                         const fs::path& base_dir) {
  const std::string value = trim(raw);
  if (key == "input") {
    input = resolve(value, base_dir);
  } else if (key == "format") {
    if (value == "files") format = CorpusFormat::OnePerFile;
    else if (value == "lines") format = CorpusFormat::OnePerLine;
    else if (value == "auto") format.reset();
    else throw UsageError("invalid format '" + value + "' (valid: files, lines, auto)");
  } else if (key == "lowercase") {
    lowercase = parse_bool(key, value);
  } else if (key == "min_token_length") {
    const auto n = parse_int(key, value);
    if (n < 1) throw UsageError("min_token_length must be >= 1");
    min_token_length = static_cast<std::size_t>(n);
  } else if (key == "stopwords") {
    stopwords = resolve(value, base_dir);
  } else if (key == "synonyms") {
    synonyms = resolve(value, base_dir);
  } else if (key == "binary") {
    binary = parse_bool(key, value);
  } else if (key == "criterion") {
    criterion = parse_criterion(value);
  } else if (key == "top") {
    const auto n = parse_int(key, value);
    if (n < 1) throw UsageError("top must be >= 1");
    top = static_cast<std::size_t>(n);
    min_score.reset();
  } else if (key == "min_score") {
    min_score = parse_real(key, value);
    top.reset();
  } else if (key == "yates") {
    yates = parse_bool(key, value);
  } else if (key == "cells") {
    cells = parse_cell_mode(value);
  } else if (key == "map") {
    if (value == "cosine") map = MapKind::Cosine;
    else if (value == "cooc") map = MapKind::Cooc;
    else throw UsageError("invalid map '" + value + "' (valid: cosine, cooc)");
  } else if (key == "cos_threshold") {
    cos_threshold = parse_real(key, value);
  } else if (key == "cooc_threshold") {
    cooc_threshold = parse_real(key, value);
  } else if (key == "factors") {
    if (value == "kaiser") {
      factors = FactorCount::kaiser();
    } else {
      const auto n = parse_int(key, value);
      if (n < 1) throw UsageError("factors must be a positive integer or 'kaiser'");
      factors = FactorCount::exactly(static_cast<int>(n));
    }
  } else if (key == "rotate") {
    rotate = parse_bool(key, value);
  } else if (key == "kaiser_normalize") {
    kaiser_normalize = parse_bool(key, value);
  } else if (key == "mode") {
    if (value == "R") mode = FactorMode::R;
    else if (value == "Q") mode = FactorMode::Q;
    else throw UsageError("invalid mode '" + value + "' (valid: R, Q)");
  } else if (key == "suppression") {
    suppression = parse_real(key, value);
    if (suppression < 0.0) throw UsageError("suppression must be >= 0");
  } else if (key == "layout") {
    if (value == "fr") layout = LayoutAlgorithm::FruchtermanReingold;
    else if (value == "kk") layout = LayoutAlgorithm::KamadaKawai;
    else throw UsageError("invalid layout '" + value + "' (valid: fr, kk)");
  } else if (key == "seed") {
    const auto n = parse_int(key, value);
    if (n < 0) throw UsageError("seed must be non-negative");
    seed = static_cast<std::uint64_t>(n);
  } else if (key == "iterations") {
    const auto n = parse_int(key, value);
    if (n < 1) throw UsageError("iterations must be >= 1");
    iterations = static_cast<int>(n);
  } else if (key == "out") {
    out = resolve(value, base_dir);
  } else if (key == "threads") {
    const auto n = parse_int(key, value);
    if (n < 1) throw UsageError("threads must be >= 1");
    threads = static_cast<unsigned>(n);
  } else {
    throw UsageError("unknown config key '" + key + "'");
  }
}

std::vector<std::pair<std::string, std::string>> PipelineConfig::entries() const {
  auto b = [](bool v) { return std::string(v ? "true" : "false"); };
  std::string fmt = "auto";
  if (format) fmt = *format == CorpusFormat::OnePerFile ? "files" : "lines";
  return {
      {"input", input.generic_string()},
      {"format", fmt},
      {"lowercase", b(lowercase)},
      {"min_token_length", std::to_string(min_token_length)},
      {"stopwords", stopwords.generic_string()},
      {"synonyms", synonyms.generic_string()},
      {"binary", b(binary)},
      {"criterion", to_string(criterion)},
      {"top", top ? std::to_string(*top) : "none"},
      {"min_score", min_score ? fmt_double(*min_score) : "none"},
      {"yates", b(yates)},
      {"cells", to_string(cells)},
      {"map", map == MapKind::Cosine ? "cosine" : "cooc"},
      {"cos_threshold", fmt_double(cos_threshold)},
      {"cooc_threshold", fmt_double(cooc_threshold)},
      {"factors", factors.explicit_k ? std::to_string(*factors.explicit_k) : "kaiser"},
      {"rotate", b(rotate)},
      {"kaiser_normalize", b(kaiser_normalize)},
      {"mode", mode == FactorMode::R ? "R" : "Q"},
      {"suppression", fmt_double(suppression)},
      {"layout", layout == LayoutAlgorithm::FruchtermanReingold ? "fr" : "kk"},
      {"seed", std::to_string(seed)},
      {"iterations", std::to_string(iterations)},
      {"out", out.generic_string()},
      {"threads", std::to_string(threads)},
  };
}

void PipelineConfig::validate() const {
  if (input.empty()) throw UsageError("no input given (set 'input' or pass --input)");
  if (top && min_score) throw UsageError("top and min_score are mutually exclusive");
  if (!top && !min_score) throw UsageError("one of top or min_score is required");
  if (out.empty()) throw UsageError("no output directory given");
}

void apply_config_text(PipelineConfig& cfg, const std::string& text,
                       const fs::path& base_dir) {
  std::istringstream in(text);
  std::string line;
  std::set<std::string> seen;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(lineno) +
                       ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    try {
      cfg.set(key, line.substr(eq + 1), base_dir);
    } catch (const UsageError& e) {
      throw UsageError("config line " + std::to_string(lineno) + ": " + e.what());
    }
    seen.insert(key);
  }
  if (seen.count("top") && seen.count("min_score"))
    throw UsageError("config sets both top and min_score; choose one");
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  PipelineConfig cfg;
  apply_config_text(cfg, buf.str(), path.parent_path());
  return cfg;
}

std::string to_string(Stage stage) {
  switch (stage) {
    case Stage::Ingest: return "ingest";
    case Stage::Terms: return "terms";
    case Stage::Map: return "map";
    case Stage::Factors: return "factors";
    case Stage::Cooc: return "cooc";
    case Stage::Render: return "render";
  }
  return "ingest";
}

Stage parse_stage(const std::string& name) {
  for (auto s : kAllStages)
    if (to_string(s) == name) return s;
  throw UsageError("unknown stage '" + name +
                   "' (valid: ingest, terms, map, factors, cooc, render)");
}

std::vector<std::string> stage_outputs(Stage stage) {
  switch (stage) {
    case Stage::Ingest: return {"matrix.csv", "expected.csv"};
    case Stage::Terms: return {"terms.csv"};
    case Stage::Map: return {"map.net"};
    case Stage::Factors: return {"loadings.csv", "factors.net"};
    case Stage::Cooc: return {"coocc.dat"};
    case Stage::Render: return {"map.svg"};
  }
  return {};
}

std::vector<std::pair<std::string, Stage>> stage_inputs(Stage stage) {
  switch (stage) {
    case Stage::Ingest: return {};
    case Stage::Terms: return {{"matrix.csv", Stage::Ingest}};
    case Stage::Map:
    case Stage::Factors:
    case Stage::Cooc:
      return {{"matrix.csv", Stage::Ingest}, {"terms.csv", Stage::Terms}};
    case Stage::Render:
      return {{"map.net", Stage::Map},
              {"loadings.csv", Stage::Factors},
              {"terms.csv", Stage::Terms}};
  }
  return {};
}

std::vector<std::string> stage_config_keys(Stage stage) {
  switch (stage) {
    case Stage::Ingest:
      return {"input", "format", "lowercase", "min_token_length", "stopwords",
              "synonyms", "binary"};
    case Stage::Terms: return {"criterion", "top", "min_score", "yates"};
    case Stage::Map:
      return {"cells", "map", "cos_threshold", "cooc_threshold", "layout", "seed",
              "iterations"};
    case Stage::Factors:
      return {"cells", "factors", "rotate", "kaiser_normalize", "mode", "suppression"};
    case Stage::Cooc: return {};
    case Stage::Render: return {"suppression"};
  }
  return {};
}

std::vector<std::string> artifact_names() {
  std::vector<std::string> names;
  for (auto s : kAllStages) {
    const auto outs = stage_outputs(s);
    names.insert(names.end(), outs.begin(), outs.end());
  }
  names.emplace_back(kReportName);
  return names;
}

std::string content_hash(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

struct StageResult {
  std::vector<std::string> warnings;
  json facts = json::object();
};

fs::path stamp_path(const PipelineConfig& cfg, Stage stage) {
  return cfg.out / kCacheDir / (to_string(stage) + ".json");
}

std::optional<json> read_stamp(const PipelineConfig& cfg, Stage stage) {
  const auto path = stamp_path(cfg, stage);
  std::error_code ec;
  if (!fs::exists(path, ec)) return std::nullopt;
  try {
    return json::parse(read_text_file(path));
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

std::string file_hash(const fs::path& path) {
  return content_hash(read_text_file(path));
}

CorpusFormat resolved_format(const PipelineConfig& cfg) {
  if (cfg.format) return *cfg.format;
  std::error_code ec;
  return fs::is_directory(cfg.input, ec) ? CorpusFormat::OnePerFile
                                         : CorpusFormat::OnePerLine;
}

// Hash of the corpus as load_corpus would see it: file names and contents.
std::string corpus_hash(const PipelineConfig& cfg) {
  std::string acc;
  std::error_code ec;
  if (resolved_format(cfg) == CorpusFormat::OnePerFile) {
    if (!fs::is_directory(cfg.input, ec))
      throw IoError("cannot read directory '" + cfg.input.string() + "'");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(cfg.input, ec)) {
      const auto name = entry.path().filename().string();
      if (!name.empty() && name.front() != '.' && entry.is_regular_file())
        files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files)
      acc += f.filename().string() + "\n" + file_hash(f) + "\n";
  } else {
    acc = file_hash(cfg.input);
  }
  return content_hash(acc);
}

class Runner {
 public:
  Runner(const PipelineConfig& cfg, std::ostream* log) : cfg_(cfg), log_(log) {
    for (const auto& [k, v] : cfg.entries()) values_[k] = v;
  }

  std::string key_for(Stage stage) {
    if (auto it = keys_.find(stage); it != keys_.end()) return it->second;
    std::string acc = "stage=" + to_string(stage) + "\n";
    for (const auto& k : stage_config_keys(stage)) {
      // Paths enter through content hashes below, not by name.
      if (k == "input" || k == "stopwords" || k == "synonyms") continue;
      acc += k + "=" + values_.at(k) + "\n";
    }
    if (stage == Stage::Ingest) {
      acc += "corpus=" + corpus_hash(cfg_) + "\n";
      acc += "resolved_format=" +
             std::string(resolved_format(cfg_) == CorpusFormat::OnePerFile ? "files"
                                                                           : "lines") +
             "\n";
      acc += "stopwords=" +
             (cfg_.stopwords.empty() ? std::string("bundled") : file_hash(cfg_.stopwords)) +
             "\n";
      acc += "synonyms=" +
             (cfg_.synonyms.empty() ? std::string("none") : file_hash(cfg_.synonyms)) + "\n";
    }
    for (const auto& [name, producer] : stage_inputs(stage)) {
      const auto path = cfg_.out / name;
      std::error_code ec;
      acc += name + "=" + (fs::exists(path, ec) ? file_hash(path) : "missing") + "\n";
    }
    return keys_[stage] = content_hash(acc);
  }

  // A stage is fresh when its stamp matches the current key and its outputs
  // are untouched.
  bool is_fresh(Stage stage, const std::optional<json>& stamp) {
    if (!stamp || !stamp->contains("key") || !stamp->contains("outputs")) return false;
    if ((*stamp)["key"] != key_for(stage)) return false;
    for (const auto& name : stage_outputs(stage)) {
      const auto path = cfg_.out / name;
      std::error_code ec;
      if (!fs::exists(path, ec)) return false;
      const auto& outs = (*stamp)["outputs"];
      if (!outs.contains(name) || outs[name] != file_hash(path)) return false;
    }
    return true;
  }

  void ensure_upstream(Stage stage) {
    for (const auto& [name, producer] : stage_inputs(stage)) {
      const auto path = cfg_.out / name;
      std::error_code ec;
      if (!fs::exists(path, ec))
        throw DataError("missing " + name + " in " + cfg_.out.string() +
                        "; run `coword-map " + to_string(producer) + "` first");
      if (checked_.count(producer)) continue;
      ensure_upstream(producer);
      if (!is_fresh(producer, read_stamp(cfg_, producer)))
        throw DataError("stale " + name + ": inputs or config changed since `" +
                        to_string(producer) + "` ran; rerun `coword-map " +
                        to_string(producer) + "`");
      checked_.insert(producer);
    }
  }

  StageOutcome run(Stage stage) {
    const auto start = std::chrono::steady_clock::now();
    ensure_upstream(stage);
    StageOutcome outcome;
    outcome.stage = stage;
    const auto stamp = read_stamp(cfg_, stage);
    if (is_fresh(stage, stamp)) {
      outcome.cache_hit = true;
      for (const auto& w : (*stamp)["warnings"]) outcome.warnings.push_back(w);
    } else {
      fs::create_directories(cfg_.out / kCacheDir);
      StageResult result = execute(stage);
      json s;
      s["stage"] = to_string(stage);
      s["key"] = key_for(stage);
      s["outputs"] = json::object();
      for (const auto& name : stage_outputs(stage))
        s["outputs"][name] = file_hash(cfg_.out / name);
      s["warnings"] = result.warnings;
      s["facts"] = result.facts;
      write_text_file(stamp_path(cfg_, stage), s.dump(2) + "\n");
      outcome.warnings = result.warnings;
    }
    checked_.insert(stage);
    outcome.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (log_) {
      *log_ << "[" << to_string(stage) << "] "
            << (outcome.cache_hit ? "cache hit" : "computed") << " in "
            << outcome.seconds << " s\n";
      for (const auto& w : outcome.warnings)
        *log_ << "[" << to_string(stage) << "] warning: " << w << "\n";
    }
    return outcome;
  }

 private:
  StageResult execute(Stage stage) {
    switch (stage) {
      case Stage::Ingest: return ingest();
      case Stage::Terms: return terms();
      case Stage::Map: return map();
      case Stage::Factors: return factors();
      case Stage::Cooc: return cooc();
      case Stage::Render: return render();
    }
    return {};
  }

  fs::path out(const std::string& name) const { return cfg_.out / name; }

  TokenizerConfig tokenizer() const {
    TokenizerConfig t;
    t.lowercase = cfg_.lowercase;
    t.min_token_length = cfg_.min_token_length;
    t.stopwords = cfg_.stopwords.empty() ? default_stopwords()
                                         : load_stopwords(cfg_.stopwords);
    if (!cfg_.synonyms.empty()) t.synonyms = load_synonyms(cfg_.synonyms);
    return t;
  }

  WordDocMatrix load_matrix() const {
    return word_doc_matrix_from_table(read_csv(out("matrix.csv")));
  }

  struct TermInfo {
    std::vector<std::string> selected;  // in ranked order
    std::map<std::string, double> freq;
  };

  TermInfo load_terms() const {
    const CsvTable t = read_csv(out("terms.csv"));
    if (t.header.size() < 7 || t.header[0] != "term" || t.header[6] != "selected")
      throw DataError("terms.csv has an unexpected header; rerun `coword-map terms`");
    TermInfo info;
    for (const auto& row : t.rows) {
      info.freq[row[0]] = std::strtod(row[1].c_str(), nullptr);
      if (row[6] == "1") info.selected.push_back(row[0]);
    }
    if (info.selected.empty()) throw DataError("terms.csv selects no terms");
    return info;
  }

  static void note_pruning(const WordDocMatrix& m, StageResult& r) {
    for (const auto& row : m.pruning().rows)
      r.warnings.push_back("pruned document '" + row + "' (no counted terms)");
    for (const auto& col : m.pruning().cols)
      r.warnings.push_back("pruned term '" + col + "' (zero occurrences)");
  }

  StageResult ingest() {
    StageResult r;
    const Corpus corpus = load_corpus(cfg_.input, resolved_format(cfg_));
    const TokenizedCorpus tokens = tokenize_corpus(corpus, tokenizer(), cfg_.threads);
    const Vocabulary vocab = build_vocabulary(tokens);
    WordDocMatrix m = build_word_doc_matrix(corpus, tokens, vocab);
    note_pruning(m, r);
    if (cfg_.binary) m = m.binarized();
    write_csv(counts_table(m), out("matrix.csv"));
    write_csv(real_matrix_table({expected_matrix(m).values, m.row_labels(),
                                 m.col_labels()}),
              out("expected.csv"));
    std::size_t n_tokens = 0;
    for (const auto& d : tokens) n_tokens += d.size();
    r.facts = {{"documents_loaded", corpus.size()},
               {"documents", m.rows()},
               {"terms", m.cols()},
               {"tokens", n_tokens},
               {"total", m.total()},
               {"pruned_documents", m.pruning().rows.size()},
               {"pruned_terms", m.pruning().cols.size()}};
    return r;
  }

  StageResult terms() {
    StageResult r;
    const WordDocMatrix m = load_matrix();
    const TermScores scores = term_scores(
        m, cfg_.yates ? YatesRule::ObservedBelow5 : YatesRule::Off);
    const auto selected =
        select_terms(scores, cfg_.criterion, Selection{cfg_.top, cfg_.min_score});
    write_csv(terms_table(rank_terms(scores, cfg_.criterion), selected),
              out("terms.csv"));
    const auto chi = chi_square(m, cfg_.yates ? YatesRule::ObservedBelow5 : YatesRule::Off);
    r.facts = {{"vocabulary", scores.size()},
               {"selected", selected.size()},
               {"chi_square_total", chi.total},
               {"degrees_of_freedom", chi.degrees_of_freedom}};
    return r;
  }

  WordDocMatrix selected_matrix(StageResult& r) const {
    const WordDocMatrix sub = load_matrix().select_columns(load_terms().selected);
    note_pruning(sub, r);
    return sub;
  }

  StageResult map() {
    StageResult r;
    const WordDocMatrix sub = selected_matrix(r);
    Graph g;
    if (cfg_.map == MapKind::Cosine) {
      LabeledMatrix cells = cell_values(sub, cfg_.cells);
      std::vector<Eigen::Index> keep;
      std::vector<std::string> labels;
      for (Eigen::Index k = 0; k < cells.values.cols(); ++k) {
        if ((cells.values.col(k).array() == 0.0).all()) {
          r.warnings.push_back("term '" + cells.col_labels[k] + "' has all-zero " +
                               to_string(cfg_.cells) + " cells; left out of the map");
        } else {
          keep.push_back(k);
          labels.push_back(cells.col_labels[k]);
        }
      }
      if (keep.empty()) throw DataError("no term has nonzero cells for the map");
      cells.values = RealMatrix(cells.values(Eigen::all, keep));
      cells.col_labels = std::move(labels);
      g = threshold_graph(cosine_matrix(cells, Orientation::Columns, cfg_.threads),
                          cfg_.cos_threshold, ThresholdRule::GreaterOrEqual);
    } else {
      g = threshold_graph(cooccurrence(sub, CoocMode::Words), cfg_.cooc_threshold,
                          ThresholdRule::Greater);
    }
    if (g.edge_count() == 0)
      r.warnings.push_back("map has no edges at the chosen threshold");

    const auto seed = cfg_.seed;
    const int iterations = cfg_.iterations;
    LayoutFn fn;
    if (cfg_.layout == LayoutAlgorithm::FruchtermanReingold) {
      fn = [iterations](const Graph& sub_g, std::uint64_t s) {
        return fruchterman_reingold(sub_g, FrOptions{iterations, s, false});
      };
    } else {
      fn = [](const Graph& sub_g, std::uint64_t s) {
        KkOptions o;
        o.seed = s;
        return kamada_kawai(sub_g, o);
      };
    }
    const Layout layout = split_and_pack(g, fn, seed, cfg_.threads);
    write_pajek_net(g, &layout, out("map.net"));
    r.facts = {{"nodes", g.node_count()},
               {"edges", g.edge_count()},
               {"components", connected_components(g).size()}};
    return r;
  }

  StageResult factors() {
    StageResult r;
    const WordDocMatrix sub = selected_matrix(r);
    FactorSolution sol = factor_analyze(cell_values(sub, cfg_.cells), cfg_.cells,
                                        cfg_.mode, cfg_.factors, cfg_.threads);
    int sweeps = 0;
    if (cfg_.rotate) {
      VarimaxReport rep;
      VarimaxOptions opts;
      opts.kaiser_normalize = cfg_.kaiser_normalize;
      sol = varimax(sol, opts, &rep);
      sweeps = rep.sweeps;
    }
    r.warnings.insert(r.warnings.end(), sol.warnings.begin(), sol.warnings.end());
    write_csv(loadings_table(sol), out("loadings.csv"));
    write_pajek_net(factor_graph(sol, cfg_.suppression), nullptr, out("factors.net"));
    json explained = json::array();
    for (double v : sol.explained_variance_pct) explained.push_back(v);
    r.facts = {{"variables", sol.variables()},
               {"factors", sol.factors()},
               {"rotated", sol.rotated},
               {"varimax_sweeps", sweeps},
               {"explained_variance_pct", explained}};
    return r;
  }

  StageResult cooc() {
    StageResult r;
    const WordDocMatrix sub = selected_matrix(r);
    const CoocMatrix c = cooccurrence(sub, CoocMode::Words);
    write_pajek_matrix(c, out("coocc.dat"));
    r.facts = {{"terms", c.labels.size()}};
    return r;
  }

  StageResult render() {
    StageResult r;
    PajekNetwork net = read_pajek_net(out("map.net"));
    const CsvTable loadings = read_csv(out("loadings.csv"));
    const TermInfo terms = load_terms();

    FactorSolution sol;
    const auto k = static_cast<Eigen::Index>(loadings.header.size()) - 2;
    if (k < 1) throw DataError("loadings.csv has no factor columns");
    sol.loadings.resize(static_cast<Eigen::Index>(loadings.rows.size()), k);
    for (std::size_t j = 0; j < loadings.rows.size(); ++j) {
      sol.variable_labels.push_back(loadings.rows[j][0]);
      for (Eigen::Index f = 0; f < k; ++f)
        sol.loadings(static_cast<Eigen::Index>(j), f) =
            std::strtod(loadings.rows[j][f + 1].c_str(), nullptr);
    }
    const FactorAssignment by_variable = assign_factors(sol, cfg_.suppression);
    std::map<std::string, std::optional<FactorMembership>> lookup;
    for (std::size_t j = 0; j < by_variable.size(); ++j)
      lookup[sol.variable_labels[j]] = by_variable[j];

    FactorAssignment assignment(net.graph.node_count());
    std::size_t matched = 0;
    for (std::size_t i = 0; i < net.graph.node_count(); ++i) {
      auto& node = net.graph.nodes()[i];
      if (auto it = lookup.find(node.label); it != lookup.end()) {
        assignment[i] = it->second;
        ++matched;
      }
      if (auto f = terms.freq.find(node.label); f != terms.freq.end())
        node.size = f->second;
    }
    if (matched == 0 && net.graph.node_count() > 0)
      r.warnings.push_back("no map node has factor loadings; nodes left white");
    Layout layout;
    layout.positions = net.coordinates;
    render_svg_map(net.graph, layout, &assignment, out("map.svg"));
    std::size_t coloured = 0;
    for (const auto& a : assignment) coloured += a.has_value();
    r.facts = {{"nodes", net.graph.node_count()}, {"coloured", coloured}};
    return r;
  }

  const PipelineConfig& cfg_;
  std::ostream* log_;
  std::map<std::string, std::string> values_;
  std::map<Stage, std::string> keys_;
  std::set<Stage> checked_;
};

void write_run_log(const PipelineConfig& cfg, const std::vector<StageOutcome>& stages) {
  json log = json::array();
  for (const auto& s : stages)
    log.push_back({{"stage", to_string(s.stage)},
                   {"cache_hit", s.cache_hit},
                   {"seconds", s.seconds}});
  fs::create_directories(cfg.out / kCacheDir);
  write_text_file(cfg.out / kCacheDir / "run-log.json", log.dump(2) + "\n");
}

void prepare(const PipelineConfig& cfg) {
  cfg.validate();
  std::error_code ec;
  fs::create_directories(cfg.out, ec);
  if (ec || !fs::is_directory(cfg.out))
    throw IoError("cannot create output directory '" + cfg.out.string() + "'");
}

}  // namespace

StageOutcome run_stage(const PipelineConfig& cfg, Stage stage, std::ostream* log) {
  prepare(cfg);
  Runner runner(cfg, log);
  StageOutcome outcome = runner.run(stage);
  write_run_log(cfg, {outcome});
  return outcome;
}

RunResult run_pipeline(const PipelineConfig& cfg, std::ostream* log) {
  prepare(cfg);
  RunResult result;
  Runner runner(cfg, log);
  for (auto stage : kAllStages) result.stages.push_back(runner.run(stage));

  json report;
  report["artifacts"] = artifact_names();
  report["config"] = json::object();
  for (const auto& [k, v] : cfg.entries()) {
    if (k == "threads" || k == "out") continue;  // do not affect results
    report["config"][k] = v;
  }
  report["stages"] = json::object();
  json warnings = json::array();
  for (auto stage : kAllStages) {
    const auto stamp = read_stamp(cfg, stage);
    json entry = json::object();
    if (stamp) {
      entry["facts"] = (*stamp)["facts"];
      entry["warnings"] = (*stamp)["warnings"];
      for (const auto& w : (*stamp)["warnings"]) {
        warnings.push_back(to_string(stage) + ": " + w.get<std::string>());
        result.warnings.push_back(to_string(stage) + ": " + w.get<std::string>());
      }
    }
    report["stages"][to_string(stage)] = entry;
  }
  report["warnings"] = warnings;
  write_text_file(cfg.out / kReportName, report.dump(2) + "\n");
  write_run_log(cfg, result.stages);
  return result;
}

}  // namespace coword
