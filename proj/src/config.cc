#include "eud/config.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace eud {

namespace {

namespace pt = boost::property_tree;

const pt::ptree* Section(const pt::ptree& root, const std::string& name) {
  auto it = root.find(name);
  return it == root.not_found() ? nullptr : &it->second;
}

template <typename T>
T Get(const pt::ptree* section, const std::string& key, T fallback,
      const std::string& where) {
  if (!section) return fallback;
  auto it = section->find(key);
  if (it == section->not_found()) return fallback;
  try {
    return it->second.get_value<T>();
  } catch (const pt::ptree_bad_data&) {
    throw ConfigError("invalid value for " + where + "." + key + ": '" +
                      it->second.data() + "'");
  }
}

bool GetBool(const pt::ptree* section, const std::string& key, bool fallback,
             const std::string& where) {
  std::string v = Get<std::string>(section, key, fallback ? "true" : "false", where);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("invalid boolean for " + where + "." + key + ": '" + v + "'");
}

std::vector<std::string> Paths(const pt::ptree& section, const std::string& key,
                               const std::string& base_dir) {
  std::vector<std::string> out;
  std::istringstream in(section.get<std::string>(key, ""));
  for (std::string p; in >> p;) {
    std::filesystem::path path(p);
    if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
    out.push_back(path.lexically_normal().string());
  }
  return out;
}

}  // namespace

ExperimentConfig ParseExperimentConfig(const std::string& text,
                                       const std::string& base_dir) {
  pt::ptree root;
  try {
    std::istringstream in(text);
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  ExperimentConfig config;
  ExperimentOptions& o = config.options;

  const pt::ptree* general = Section(root, "general");
  o.seed = Get<uint64_t>(general, "seed", o.seed, "general");
  std::string mode = Get<std::string>(general, "mode", "tree-graph", "general");
  auto parsed_mode = ParseParserMode(mode);
  if (!parsed_mode) throw ConfigError("unknown mode '" + mode + "'");
  o.mode = *parsed_mode;
  std::filesystem::path out_dir = Get<std::string>(general, "output_dir", ".", "general");
  if (out_dir.is_relative()) out_dir = std::filesystem::path(base_dir) / out_dir;
  config.output_dir = out_dir.lexically_normal().string();

  const pt::ptree* model = Section(root, "model");
  o.model.embedding_dim = Get<int>(model, "embedding_dim", o.model.embedding_dim, "model");
  o.model.recurrent_layers = Get<int>(model, "recurrent_layers", o.model.recurrent_layers, "model");
  o.model.arc_hidden = Get<int>(model, "arc_hidden", o.model.arc_hidden, "model");
  o.model.rel_hidden = Get<int>(model, "rel_hidden", o.model.rel_hidden, "model");
  o.model.unk_buckets = Get<int>(model, "unk_buckets", o.model.unk_buckets, "model");

  const pt::ptree* optim = Section(root, "optimizer");
  o.batch_size = Get<int>(optim, "batch_size", o.batch_size, "optimizer");
  o.gradient_clip = Get<double>(optim, "gradient_clip", o.gradient_clip, "optimizer");
  o.weight_decay = Get<double>(optim, "weight_decay", o.weight_decay, "optimizer");

  const pt::ptree* labels = Section(root, "labels");
  if (labels && labels->count("lexicalizing_relations")) {
    o.lex.relations.clear();
    std::string list = labels->get<std::string>("lexicalizing_relations");
    for (std::string r : SplitString(list, ',')) {
      r.erase(0, r.find_first_not_of(' '));
      r.erase(r.find_last_not_of(' ') + 1);
      if (!r.empty()) o.lex.relations.push_back(r);
    }
  }

  const pt::ptree* generic = Section(root, "generic");
  o.generic.enabled = GetBool(generic, "enabled", o.generic.enabled, "generic");
  o.generic.epochs = Get<int>(generic, "epochs", o.generic.epochs, "generic");
  o.generic.learning_rate =
      Get<double>(generic, "learning_rate", o.generic.learning_rate, "generic");

  const pt::ptree* finetune = Section(root, "finetune");
  o.finetune.enabled = GetBool(finetune, "enabled", o.finetune.enabled, "finetune");
  o.finetune.epochs = Get<int>(finetune, "epochs", o.finetune.epochs, "finetune");
  o.finetune.learning_rate = Get<double>(finetune, "learning_rate",
                                         o.generic.learning_rate / 10.0, "finetune");

  for (const auto& [name, section] : root) {
    if (!name.starts_with("language:")) continue;
    LanguageFiles lang;
    lang.name = name.substr(9);
    lang.train = Paths(section, "train", base_dir);
    lang.dev = Paths(section, "dev", base_dir);
    if (lang.name.empty() || lang.train.empty()) {
      throw ConfigError("section [" + name + "] needs a name and train files");
    }
    config.languages.push_back(std::move(lang));
  }
  if (config.languages.empty()) throw ConfigError("no [language:NAME] sections");
  if (!o.generic.enabled && !o.finetune.enabled) {
    throw ConfigError("both training stages are disabled");
  }
  if (o.batch_size < 1 || o.generic.epochs < 0 || o.finetune.epochs < 0) {
    throw ConfigError("batch_size and epochs must be positive");
  }
  return config;
}

ExperimentConfig ReadExperimentConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string base = std::filesystem::path(path).parent_path().string();
  return ParseExperimentConfig(buffer.str(), base.empty() ? "." : base);
}

std::vector<LanguageData> LoadLanguages(const ExperimentConfig& config) {
  std::vector<LanguageData> out;
  for (const LanguageFiles& files : config.languages) {
    LanguageData data;
    data.name = files.name;
    for (const std::string& p : files.train) {
      std::vector<Sentence> s = ReadConlluFile(p);
      data.train.insert(data.train.end(), s.begin(), s.end());
    }
    for (const std::string& p : files.dev) {
      std::vector<Sentence> s = ReadConlluFile(p);
      data.dev.insert(data.dev.end(), s.begin(), s.end());
    }
    out.push_back(std::move(data));
  }
  return out;
}

}  // namespace eud
