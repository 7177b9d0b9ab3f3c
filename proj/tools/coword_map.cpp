// coword-map: corpus -> word-document matrix -> term statistics -> maps.

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "coword/pipeline.hpp"

namespace {

struct Flags {
  std::string config;
  std::map<std::string, std::string> values;  // config key -> flag value
  bool no_rotate = false;
  bool binary = false;
  bool no_yates = false;
};

void add_pipeline_options(CLI::App* app, Flags& flags) {
  app->add_option("--config", flags.config, "Configuration file (key = value)");
  auto value = [&](const std::string& flag, const std::string& key,
                   const std::string& help) {
    return app->add_option_function<std::string>(
        flag, [&flags, key](const std::string& v) { flags.values[key] = v; }, help);
  };
  value("--input", "input", "Corpus directory or one-document-per-line file");
  value("--format", "format", "files | lines | auto");
  value("--stopwords", "stopwords", "Stopword file replacing the bundled list");
  value("--synonyms", "synonyms", "variant<TAB>canonical mapping file");
  value("--criterion", "criterion", "freq | tfidf | chi2 | obsexp");
  auto* top = value("--top", "top", "Keep the N best terms");
  auto* min_score = value("--min-score", "min_score", "Keep terms scoring >= X");
  top->excludes(min_score);
  value("--cells", "cells", "counts | tfidf | obsexp");
  value("--map", "map", "cosine | cooc");
  value("--cos-threshold", "cos_threshold", "Cosine edge threshold (>=)");
  value("--cooc-threshold", "cooc_threshold", "Co-occurrence edge threshold (>)");
  value("--factors", "factors", "Number of factors, or 'kaiser'");
  value("--mode", "mode", "R | Q");
  value("--suppression", "suppression", "Factor loading suppression level");
  value("--layout", "layout", "fr | kk");
  value("--seed", "seed", "Layout seed");
  value("--iterations", "iterations", "Fruchterman-Reingold iterations");
  value("--out", "out", "Output directory");
  value("--threads", "threads", "Worker thread cap (results do not depend on it)");
  app->add_flag("--no-rotate", flags.no_rotate, "Skip varimax rotation");
  app->add_flag("--binary", flags.binary, "Count presence instead of occurrences");
  app->add_flag("--no-yates", flags.no_yates, "Disable the Yates correction");
}

coword::PipelineConfig build_config(const Flags& flags) {
  coword::PipelineConfig cfg =
      flags.config.empty() ? coword::PipelineConfig{} : coword::load_config(flags.config);
  for (const auto& [key, value] : flags.values) cfg.set(key, value);
  if (flags.no_rotate) cfg.rotate = false;
  if (flags.binary) cfg.binary = true;
  if (flags.no_yates) cfg.yates = false;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semantic maps from a document corpus", "coword-map"};
  app.require_subcommand(1);

  Flags flags;
  auto* run = app.add_subcommand("run", "Run the full pipeline");
  add_pipeline_options(run, flags);
  std::map<CLI::App*, coword::Stage> stages;
  for (auto stage : coword::kAllStages) {
    auto* sub = app.add_subcommand(coword::to_string(stage),
                                   "Run the '" + coword::to_string(stage) + "' stage");
    add_pipeline_options(sub, flags);
    stages[sub] = stage;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    const coword::PipelineConfig cfg = build_config(flags);
    if (run->parsed()) {
      coword::run_pipeline(cfg, &std::cerr);
    } else {
      for (const auto& [sub, stage] : stages)
        if (sub->parsed()) coword::run_stage(cfg, stage, &std::cerr);
    }
  } catch (const coword::Error& e) {
    std::cerr << "coword-map: " << e.what() << "\n";
    return e.exit_status();
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "coword-map: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "coword-map: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
