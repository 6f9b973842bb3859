// eudparse: enhanced-UD parsing toolkit.
//
//   eudparse train --config exp.ini
//   eudparse parse --model en.model --input dev.conllu --output pred.conllu
//   eudparse eval --gold dev.conllu --system pred.conllu --metric both
//   eudparse transform extract-tree --input gold.conllu
//   eudparse build-lexicons --input train.conllu --output-prefix en
//
// Exit codes: 0 ok, 1 usage, 2 data error, 3 internal invariant violation.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "eud/baseline.h"
#include "eud/config.h"
#include "eud/conllu.h"
#include "eud/eval.h"
#include "eud/graph.h"
#include "eud/labels.h"
#include "eud/model_io.h"
#include "eud/mwt.h"
#include "eud/pipeline.h"
#include "eud/spanning.h"
#include "eud/train.h"

namespace {

using namespace eud;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

// Thrown for problems with the user's files that are not format errors.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<Sentence> ReadInput(const std::string& path) {
  if (path == "-") return ParseConllu(std::cin);
  if (!std::filesystem::exists(path)) throw DataError("no such file: " + path);
  return ReadConlluFile(path);
}

std::vector<Sentence> ReadInputs(const std::vector<std::string>& paths) {
  std::vector<Sentence> all;
  for (const std::string& p : paths) {
    std::vector<Sentence> part = ReadInput(p);
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

void WriteOutput(const std::string& path, const std::vector<Sentence>& sentences) {
  if (path == "-") {
    SerializeConllu(sentences, std::cout);
    std::cout.flush();
  } else {
    WriteConlluFile(path, sentences);
  }
}

std::ifstream OpenOrThrow(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

std::string SentenceLabel(const Sentence& s, size_t index) {
  std::string id = s.SentId();
  return id.empty() ? "#" + std::to_string(index + 1) : id;
}

// Rethrows with the sentence id prepended.
template <typename F>
auto WithSentence(const Sentence& s, size_t index, F&& f) {
  try {
    return f();
  } catch (const GraphError& e) {
    throw GraphError(SentenceLabel(s, index) + ": " + e.what());
  } catch (const ExtractionError& e) {
    throw ExtractionError(SentenceLabel(s, index) + ": " + e.what());
  } catch (const ExpansionError& e) {
    throw ExpansionError(SentenceLabel(s, index) + ": " + e.what());
  }
}

// ---------------------------------------------------------------- train

struct TrainArgs {
  std::string config;
  std::string mode;
  std::optional<uint64_t> seed;
};

void SaveTrained(const TrainedModel& trained, const std::string& path) {
  SaveModel(trained.model, path);
  std::ofstream lemmas(path + ".lemmas");
  trained.lexicon.Save(lemmas);
  if (!lemmas) throw DataError("cannot write " + path + ".lemmas");
}

int RunTrain(const TrainArgs& args) {
  ExperimentConfig config = ReadExperimentConfig(args.config);
  if (!args.mode.empty()) config.options.mode = *ParseParserMode(args.mode);
  if (args.seed) config.options.seed = *args.seed;
  std::vector<LanguageData> languages = LoadLanguages(config);

  std::filesystem::create_directories(config.output_dir);
  const std::filesystem::path dir(config.output_dir);
  std::ofstream log_file(dir / "train.log");
  // Tee the log to the file and stderr.
  struct TeeBuf : std::streambuf {
    std::streambuf* a;
    std::streambuf* b;
    int overflow(int c) override {
      if (c == EOF) return !EOF;
      return a->sputc(static_cast<char>(c)) == EOF || b->sputc(static_cast<char>(c)) == EOF
                 ? EOF : c;
    }
    int sync() override { return a->pubsync() | b->pubsync(); }
  } tee;
  tee.a = log_file.rdbuf();
  tee.b = std::cerr.rdbuf();
  std::ostream log(&tee);
  log << "mode=" << ParserModeName(config.options.mode) << " seed=" << config.options.seed
      << '\n';

  ExperimentResult result = TrainTwoStage(languages, config.options, &log);
  if (result.generic) {
    std::string path = (dir / "generic.model").string();
    SaveTrained(*result.generic, path);
    log << "wrote " << path << '\n';
  }
  for (const auto& [name, trained] : result.languages) {
    std::string path = (dir / (name + ".model")).string();
    SaveTrained(trained, path);
    log << "wrote " << path << '\n';
  }
  log.flush();
  return 0;
}

// ---------------------------------------------------------------- parse

struct ParseArgs {
  std::string model;
  std::string lexicon;
  std::string input = "-";
  std::string output = "-";
  bool single_root = false;
  bool write_tree = false;
  int workers = 1;
  std::string repair = "greedy";
};

int RunParse(const ParseArgs& args) {
  if (!std::filesystem::exists(args.model)) throw DataError("no such model: " + args.model);
  ScoreModel model = LoadModel(args.model);
  std::string lexicon_path = args.lexicon.empty() ? args.model + ".lemmas" : args.lexicon;
  std::ifstream lex_in = OpenOrThrow(lexicon_path);
  LemmaLexicon lexicon = LemmaLexicon::Load(lex_in);
  std::vector<Sentence> input = ReadInput(args.input);

  ParseOptions options;
  options.decode.single_root = args.single_root;
  options.decode.repair = args.repair == "mst" ? RepairMethod::kMst : RepairMethod::kGreedy;
  options.write_tree = args.write_tree;
  options.workers = args.workers;
  ParseStats stats;
  std::vector<Sentence> parsed = ParseCorpus(model, lexicon, input, options, &stats);
  for (const std::string& w : stats.warnings) std::cerr << w << '\n';
  WriteOutput(args.output, parsed);
  return 0;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string gold;
  std::string system;
  std::string manifest;
  std::string metric = "both";
};

struct Scores {
  EvalResult elas;
  EvalResult eulas;
};

Scores Evaluate(const std::string& gold_path, const std::string& system_path) {
  std::vector<Sentence> gold = ReadInput(gold_path);
  std::vector<Sentence> system = ReadInput(system_path);
  std::vector<EnhancedGraph> g, s;
  std::vector<std::string> ids;
  for (size_t k = 0; k < gold.size(); ++k) {
    g.push_back(gold[k].enhanced);
    ids.push_back(SentenceLabel(gold[k], k));
  }
  for (const Sentence& x : system) s.push_back(x.enhanced);
  return {Elas(g, s, ids), Eulas(g, s, ids)};
}

void Report(const std::string& prefix, const Scores& scores, const std::string& metric) {
  if (metric != "eulas") WriteMetric(std::cout, prefix + "ELAS", scores.elas);
  if (metric != "elas") WriteMetric(std::cout, prefix + "EULAS", scores.eulas);
}

// Manifest lines: "language gold-path system-path"; '#' starts a comment.
// Relative paths are taken from the manifest's directory.
int RunEval(const EvalArgs& args) {
  if (args.manifest.empty()) {
    if (args.gold.empty() || args.system.empty()) {
      throw CLI::ValidationError("eval needs --gold and --system, or --manifest");
    }
    Report("", Evaluate(args.gold, args.system), args.metric);
    return 0;
  }
  std::ifstream in = OpenOrThrow(args.manifest);
  const std::filesystem::path base = std::filesystem::path(args.manifest).parent_path();
  auto resolve = [&](const std::string& p) {
    std::filesystem::path path(p);
    return (path.is_relative() ? base / path : path).string();
  };
  std::vector<double> elas_f1, eulas_f1;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string lang, gold, system;
    if (!(fields >> lang) || lang[0] == '#') continue;
    if (!(fields >> gold >> system)) {
      throw DataError("manifest line needs 'language gold system': " + line);
    }
    Scores scores = Evaluate(resolve(gold), resolve(system));
    Report(lang + ".", scores, args.metric);
    elas_f1.push_back(100.0 * scores.elas.f1());
    eulas_f1.push_back(100.0 * scores.eulas.f1());
  }
  if (elas_f1.empty()) throw DataError("manifest lists no languages");
  std::cout << std::fixed << std::setprecision(2);
  if (args.metric != "eulas") std::cout << "MACRO.ELAS_F1=" << MacroAverage(elas_f1) << '\n';
  if (args.metric != "elas") std::cout << "MACRO.EULAS_F1=" << MacroAverage(eulas_f1) << '\n';
  return 0;
}

// ---------------------------------------------------------------- transform

struct TransformArgs {
  std::string input = "-";
  std::string output = "-";
  std::string lexicon;
  std::string rules;
};

CollapsedGraph Collapse(const Sentence& s, size_t k) {
  return WithSentence(s, k, [&] { return CollapseEmptyNodes(s.enhanced).graph; });
}

int RunCollapse(const TransformArgs& args, bool merge) {
  std::vector<Sentence> sentences = ReadInput(args.input);
  for (size_t k = 0; k < sentences.size(); ++k) {
    CollapsedGraph g = Collapse(sentences[k], k);
    sentences[k].SetEnhanced(merge ? MergeParallelEdges(g) : g);
  }
  WriteOutput(args.output, sentences);
  return 0;
}

// HEAD/DEPREL get the extracted tree, DEPS the residual edges.
int RunExtractTree(const TransformArgs& args) {
  std::vector<Sentence> sentences = ReadInput(args.input);
  for (size_t k = 0; k < sentences.size(); ++k) {
    Sentence& s = sentences[k];
    CollapsedGraph g = MergeParallelEdges(Collapse(s, k));
    SpanningTree tree = WithSentence(s, k, [&] { return ExtractSpanningTree(s, g); });
    std::vector<Edge> residual = ResidualEdges(g, tree);
    s.SetEnhanced(SplitParallelEdges(CollapsedGraph{g.n, residual}));
    for (int j = 1; j <= tree.n; ++j) {
      s.word(j).basic_head = SurfaceNode(tree.heads[j]);
      s.word(j).basic_deprel = tree.labels[j];
    }
  }
  WriteOutput(args.output, sentences);
  return 0;
}

int RunDelex(const TransformArgs& args) {
  std::vector<Sentence> sentences = ReadInput(args.input);
  std::set<std::string> grammatical = HarvestGrammaticalSubtypes(sentences);
  LexicalizationOptions options;
  long placeholders = 0, failures = 0;
  std::vector<Sentence> gold = sentences;
  for (size_t k = 0; k < sentences.size(); ++k) {
    CollapsedGraph g = MergeParallelEdges(Collapse(sentences[k], k));
    DelexResult delex = Delexicalize(sentences[k], g, grammatical, options);
    placeholders += delex.placeholders;
    failures += delex.failures;
    sentences[k].SetEnhanced(delex.graph);
  }
  std::cerr << "placeholders=" << placeholders << " failures=" << failures << '\n';
  if (!args.lexicon.empty()) {
    std::ifstream in = OpenOrThrow(args.lexicon);
    RoundTripCoverage c = MeasureRoundTrip(gold, grammatical, LemmaLexicon::Load(in), options);
    std::cerr << "roundtrip eligible=" << c.eligible << " restored=" << c.restored
              << " coverage=" << std::fixed << std::setprecision(2) << 100.0 * c.coverage()
              << '\n';
  }
  WriteOutput(args.output, sentences);
  return 0;
}

int RunRelex(const TransformArgs& args) {
  if (args.lexicon.empty()) throw CLI::ValidationError("relex needs --lexicon");
  std::ifstream in = OpenOrThrow(args.lexicon);
  LemmaLexicon lexicon = LemmaLexicon::Load(in);
  std::vector<Sentence> sentences = ReadInput(args.input);
  long filled = 0, failures = 0;
  for (size_t k = 0; k < sentences.size(); ++k) {
    Sentence& s = sentences[k];
    RelexResult relex = Relexicalize(s, Collapse(s, k), lexicon);
    filled += relex.filled;
    failures += relex.failures;
    if (relex.failures) {
      std::cerr << "W-RELEX " << SentenceLabel(s, k) << ": " << relex.failures
                << " placeholder(s) without a matching child\n";
    }
    s.SetEnhanced(SplitParallelEdges(relex.graph));
  }
  std::cerr << "filled=" << filled << " failures=" << failures << '\n';
  WriteOutput(args.output, sentences);
  return 0;
}

int RunExpandMwt(const TransformArgs& args) {
  MwtLexicon lexicon;
  if (!args.lexicon.empty()) {
    std::ifstream in = OpenOrThrow(args.lexicon);
    lexicon = MwtLexicon::Load(in);
  }
  std::vector<SplitRule> rules;
  if (!args.rules.empty()) {
    std::ifstream in = OpenOrThrow(args.rules);
    rules = ParseSplitRules(in);
  }
  std::vector<Sentence> sentences = ReadInput(args.input);
  for (size_t k = 0; k < sentences.size(); ++k) {
    sentences[k] = WithSentence(sentences[k], k,
                                [&] { return ExpandSentence(sentences[k], lexicon, rules); });
  }
  WriteOutput(args.output, sentences);
  return 0;
}

// ---------------------------------------------------------------- lexicons

struct LexiconArgs {
  std::vector<std::string> inputs;
  std::string prefix;
};

int RunBuildLexicons(const LexiconArgs& args) {
  std::vector<Sentence> sentences = ReadInputs(args.inputs);
  std::ofstream lemmas(args.prefix + ".lemmas");
  LemmaLexicon::Build(sentences).Save(lemmas);
  std::ofstream mwt(args.prefix + ".mwt");
  MwtLexicon::Build(sentences).Save(mwt);
  if (!lemmas || !mwt) throw DataError("cannot write lexicons with prefix " + args.prefix);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Enhanced Universal Dependencies parser"};
  app.require_subcommand(1);

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "Train generic and per-language models");
  train->add_option("--config", train_args.config, "Experiment config (INI)")
      ->required()->check(CLI::ExistingFile);
  train->add_option("--mode", train_args.mode, "Override the config's parser mode")
      ->check(CLI::IsMember({"tree-graph", "graph-fix"}));
  train->add_option("--seed", train_args.seed, "Override the config's seed");

  ParseArgs parse_args;
  CLI::App* parse = app.add_subcommand("parse", "Fill DEPS of pre-tokenized CoNLL-U");
  parse->add_option("--model", parse_args.model, "Model file")->required();
  parse->add_option("--lexicon", parse_args.lexicon, "Lemma lexicon (default: MODEL.lemmas)");
  parse->add_option("--input", parse_args.input, "Input CoNLL-U ('-' for stdin)");
  parse->add_option("--output", parse_args.output, "Output CoNLL-U ('-' for stdout)");
  parse->add_flag("--single-root", parse_args.single_root, "Allow one root child only");
  parse->add_flag("--write-tree", parse_args.write_tree,
                  "Overwrite HEAD/DEPREL with the decoded tree");
  parse->add_option("--workers", parse_args.workers, "Parsing threads")
      ->check(CLI::PositiveNumber);
  parse->add_option("--repair", parse_args.repair,
                    "Connectivity repair for graph-fix models: greedy or mst")
      ->check(CLI::IsMember({"greedy", "mst"}));

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "Score system DEPS against gold");
  eval->add_option("--gold", eval_args.gold, "Gold CoNLL-U");
  eval->add_option("--system", eval_args.system, "System CoNLL-U");
  eval->add_option("--manifest", eval_args.manifest,
                   "Lines of 'language gold system' for a macro average");
  eval->add_option("--metric", eval_args.metric, "elas, eulas or both")
      ->check(CLI::IsMember({"elas", "eulas", "both"}));

  TransformArgs transform_args;
  CLI::App* transform = app.add_subcommand("transform", "Apply one graph transform");
  transform->require_subcommand(1);
  auto add_io = [&](CLI::App* cmd) {
    cmd->add_option("--input", transform_args.input, "Input CoNLL-U ('-' for stdin)");
    cmd->add_option("--output", transform_args.output, "Output CoNLL-U ('-' for stdout)");
    return cmd;
  };
  CLI::App* collapse = add_io(transform->add_subcommand("collapse", "Collapse empty nodes"));
  CLI::App* merge = add_io(transform->add_subcommand("merge", "Collapse, then merge parallel edges"));
  CLI::App* extract = add_io(transform->add_subcommand(
      "extract-tree", "Spanning tree into HEAD/DEPREL, residual edges into DEPS"));
  CLI::App* delex = add_io(transform->add_subcommand("delex", "De-lexicalize labels"));
  delex->add_option("--lexicon", transform_args.lexicon,
                    "Lemma lexicon; reports relex round-trip coverage");
  CLI::App* relex = add_io(transform->add_subcommand("relex", "Re-lexicalize labels"));
  relex->add_option("--lexicon", transform_args.lexicon, "Lemma lexicon")->required();
  CLI::App* expand = add_io(transform->add_subcommand("expand-mwt", "Split multi-word tokens"));
  expand->add_option("--lexicon", transform_args.lexicon, "MWT lexicon");
  expand->add_option("--rules", transform_args.rules, "Prefix/suffix rule file");

  LexiconArgs lexicon_args;
  CLI::App* lexicons = app.add_subcommand("build-lexicons", "Build lemma and MWT lexicons");
  lexicons->add_option("--input", lexicon_args.inputs, "Training CoNLL-U files")
      ->required()->expected(1, -1);
  lexicons->add_option("--output-prefix", lexicon_args.prefix,
                       "Writes PREFIX.lemmas and PREFIX.mwt")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*train) return RunTrain(train_args);
    if (*parse) return RunParse(parse_args);
    if (*eval) return RunEval(eval_args);
    if (*collapse) return RunCollapse(transform_args, false);
    if (*merge) return RunCollapse(transform_args, true);
    if (*extract) return RunExtractTree(transform_args);
    if (*delex) return RunDelex(transform_args);
    if (*relex) return RunRelex(transform_args);
    if (*expand) return RunExpandMwt(transform_args);
    if (*lexicons) return RunBuildLexicons(lexicon_args);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::logic_error& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
