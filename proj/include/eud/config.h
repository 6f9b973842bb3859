// Experiment configuration: an INI-style file with one section per concern
// and one "[language:NAME]" section per language.
//
//   [general]   seed, mode (tree-graph | graph-fix), output_dir
//   [model]     embedding_dim, recurrent_layers, arc_hidden, rel_hidden, unk_buckets
//   [optimizer] batch_size, gradient_clip, weight_decay
//   [labels]    lexicalizing_relations (comma-separated)
//   [generic]   enabled, epochs, learning_rate
//   [finetune]  enabled, epochs, learning_rate (default: generic rate / 10)
//   [language:NAME]  train, dev (whitespace-separated file lists)
//
// Relative paths are resolved against the config file's directory.

#ifndef EUD_CONFIG_H_
#define EUD_CONFIG_H_

#include <stdexcept>
#include <string>
#include <vector>

#include "eud/train.h"

namespace eud {

struct LanguageFiles {
  std::string name;
  std::vector<std::string> train;
  std::vector<std::string> dev;
};

struct ExperimentConfig {
  ExperimentOptions options;
  std::vector<LanguageFiles> languages;
  std::string output_dir = ".";
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ExperimentConfig ReadExperimentConfig(const std::string& path);
ExperimentConfig ParseExperimentConfig(const std::string& text,
                                       const std::string& base_dir = ".");

// Reads and concatenates every configured file per language.
std::vector<LanguageData> LoadLanguages(const ExperimentConfig& config);

}  // namespace eud

#endif  // EUD_CONFIG_H_
