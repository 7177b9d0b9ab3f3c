#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coword/common.hpp"
#include "coword/corpus.hpp"
#include "coword/factors.hpp"
#include "coword/termstats.hpp"

namespace coword {

enum class MapKind { Cosine, Cooc };
enum class LayoutAlgorithm { FruchtermanReingold, KamadaKawai };

/// Every pipeline switch with its default. Keys are the flat `key = value`
/// names accepted by config files; command-line flags override them.
struct PipelineConfig {
  std::filesystem::path input;
  std::optional<CorpusFormat> format;  // inferred from the input when empty
  bool lowercase = true;
  std::size_t min_token_length = 2;
  std::filesystem::path stopwords;  // empty: bundled English list
  std::filesystem::path synonyms;
  bool binary = false;

  Criterion criterion = Criterion::Freq;
  std::optional<std::size_t> top = 75;
  std::optional<double> min_score;
  bool yates = true;

  CellMode cells = CellMode::Counts;
  MapKind map = MapKind::Cosine;
  double cos_threshold = 0.1;
  double cooc_threshold = 1.0;

  FactorCount factors = FactorCount::kaiser();
  bool rotate = true;
  bool kaiser_normalize = true;
  FactorMode mode = FactorMode::R;
  double suppression = kDefaultSuppression;

  LayoutAlgorithm layout = LayoutAlgorithm::FruchtermanReingold;
  std::uint64_t seed = 42;
  int iterations = 500;

  std::filesystem::path out = "out";
  unsigned threads = 1;

  /// Sets one key from its text form. Unknown keys and malformed values
  /// are UsageErrors. Relative paths resolve against `base_dir`.
  void set(const std::string& key, const std::string& value,
           const std::filesystem::path& base_dir = {});

  /// Canonical (key, value) pairs in a fixed order.
  std::vector<std::pair<std::string, std::string>> entries() const;

  void validate() const;
};

/// Reads `key = value` lines ('#' comments) on top of the defaults.
PipelineConfig load_config(const std::filesystem::path& path);
void apply_config_text(PipelineConfig& cfg, const std::string& text,
                       const std::filesystem::path& base_dir);

enum class Stage { Ingest, Terms, Map, Factors, Cooc, Render };

inline constexpr std::array<Stage, 6> kAllStages = {
    Stage::Ingest, Stage::Terms, Stage::Map,
    Stage::Factors, Stage::Cooc, Stage::Render};

std::string to_string(Stage stage);
Stage parse_stage(const std::string& name);

/// Files a stage writes into the output directory.
std::vector<std::string> stage_outputs(Stage stage);
/// Artifacts a stage reads, paired with the stage producing each.
std::vector<std::pair<std::string, Stage>> stage_inputs(Stage stage);
/// Config keys a stage depends on.
std::vector<std::string> stage_config_keys(Stage stage);

/// The nine artifacts of a full run.
std::vector<std::string> artifact_names();

inline constexpr const char* kReportName = "run-report.json";
inline constexpr const char* kCacheDir = ".cache";

struct StageOutcome {
  Stage stage = Stage::Ingest;
  bool cache_hit = false;
  double seconds = 0.0;
  std::vector<std::string> warnings;
};

struct RunResult {
  std::vector<StageOutcome> stages;
  std::vector<std::string> warnings;
};

/// Runs one stage, reusing its cached outputs when the inputs and config
/// slice are unchanged. Missing or stale upstream artifacts are an error
/// naming the stage to rerun.
StageOutcome run_stage(const PipelineConfig& cfg, Stage stage,
                       std::ostream* log = nullptr);

/// All stages in order, then the run report.
RunResult run_pipeline(const PipelineConfig& cfg, std::ostream* log = nullptr);

/// 64-bit FNV-1a, hex encoded.
std::string content_hash(std::string_view bytes);

}  // namespace coword
