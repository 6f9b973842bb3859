#include "eud/train.h"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <ostream>

namespace eud {

namespace {

void ScaleGradient(ModelParams& grad, double factor) {
  ForEachBlock(grad, [&](const std::string&, double* data, Eigen::Index count) {
    for (Eigen::Index k = 0; k < count; ++k) data[k] *= factor;
  });
}

std::vector<Sentence> Concatenate(const std::vector<LanguageData>& languages,
                                  bool dev) {
  std::vector<Sentence> all;
  for (const LanguageData& l : languages) {
    const std::vector<Sentence>& part = dev ? l.dev : l.train;
    all.insert(all.end(), part.begin(), part.end());
  }
  return all;
}

void LogPreparation(std::ostream* log, const std::string& stage,
                    const PreparedCorpus& corpus) {
  if (!log) return;
  const PreparationStats& s = corpus.stats;
  *log << "stage=" << stage << " sentences=" << s.sentences
       << " extraction_failures=" << s.extraction_failures
       << " delex_placeholders=" << s.delex_placeholders
       << " delex_failures=" << s.delex_failures
       << " dropped_empty_edges=" << s.dropped_empty_edges
       << " skipped=" << s.skipped << '\n';
  for (const std::string& w : s.warnings) *log << w << '\n';
}

TrainedModel RunStage(ScoreModel model, const std::vector<Sentence>& train,
                      const std::vector<Sentence>& dev,
                      const PreparedCorpus& corpus, const StageOptions& stage,
                      const ExperimentOptions& options, std::mt19937_64& rng,
                      const std::string& name, std::ostream* log) {
  TrainerOptions trainer;
  trainer.epochs = stage.epochs;
  trainer.batch_size = options.batch_size;
  trainer.gradient_clip = options.gradient_clip;
  trainer.optimizer.learning_rate = stage.learning_rate;
  trainer.optimizer.weight_decay = options.weight_decay;
  LemmaLexicon lexicon = LemmaLexicon::Build(train);
  DevData dev_data;
  if (!dev.empty()) {
    dev_data.sentences = &dev;
    dev_data.lexicon = &lexicon;
    dev_data.lex = options.lex;
  }
  if (log) *log << "stage=" << name << " learning_rate=" << stage.learning_rate << '\n';
  TrainingReport report = Train(model, corpus, trainer, rng, dev_data, log);
  return TrainedModel{std::move(model), std::move(lexicon), std::move(report)};
}

// Dev labels the model cannot produce only cost recall; they are reported,
// not trained on.
void WarnUnknownDevLabels(const ScoreModel& model, const std::vector<Sentence>& dev,
                          const std::set<std::string>& grammatical,
                          const LexicalizationOptions& lex, std::ostream* log) {
  if (!log || dev.empty()) return;
  PreparedCorpus corpus = PrepareCorpus(dev, grammatical, lex);
  std::set<std::string> unknown;
  for (const PreparedSentence& s : corpus.sentences) {
    for (const Edge& e : s.gold.edges) {
      if (!model.LabelIndex(e.label)) unknown.insert(e.label);
    }
  }
  for (const std::string& label : unknown) {
    *log << "W-DEVLABEL " << label << ": not in the training label vocabulary\n";
  }
}

}  // namespace

LossValue CorpusLoss(const ScoreModel& model, const PreparedCorpus& corpus) {
  LossValue total;
  for (const PreparedSentence& s : corpus.sentences) {
    LossValue l = model.Loss(s.forms, MakeTargets(model, s), nullptr);
    total.tree += l.tree;
    total.graph += l.graph;
    total.rel += l.rel;
  }
  return total;
}

EvalResult EvaluateElas(const ScoreModel& model, const LemmaLexicon& lexicon,
                        const std::vector<Sentence>& gold,
                        const ParseOptions& options) {
  std::vector<Sentence> parsed = ParseCorpus(model, lexicon, gold, options);
  std::vector<EnhancedGraph> g, s;
  for (size_t k = 0; k < gold.size(); ++k) {
    g.push_back(gold[k].enhanced);
    s.push_back(parsed[k].enhanced);
  }
  return Elas(g, s);
}

TrainingReport Train(ScoreModel& model, const PreparedCorpus& corpus,
                     const TrainerOptions& options, std::mt19937_64& rng,
                     const DevData& dev, std::ostream* log) {
  TrainingReport report;
  std::vector<TrainingTargets> targets;
  targets.reserve(corpus.sentences.size());
  for (const PreparedSentence& s : corpus.sentences) targets.push_back(MakeTargets(model, s));

  RAdam optimizer(options.optimizer);
  ModelParams grad = model.params();
  grad.SetZero();
  std::vector<size_t> order(corpus.sentences.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::optional<ModelParams> best;
  double best_elas = -1.0;
  const int batch = std::max(1, options.batch_size);

  for (int epoch = 1; epoch <= options.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    EpochRecord record;
    record.epoch = epoch;
    int pending = 0;
    for (size_t k = 0; k < order.size(); ++k) {
      const PreparedSentence& s = corpus.sentences[order[k]];
      record.loss += model.Loss(s.forms, targets[order[k]], &grad).total();
      ++pending;
      if (pending == batch || k + 1 == order.size()) {
        ScaleGradient(grad, 1.0 / pending);
        ClipGradientNorm(grad, options.gradient_clip);
        optimizer.Step(model.params(), grad);
        grad.SetZero();
        pending = 0;
      }
    }
    if (dev.sentences && !dev.sentences->empty()) {
      ParseOptions parse;
      parse.lex = dev.lex;
      record.dev_elas = EvaluateElas(model, *dev.lexicon, *dev.sentences, parse).f1();
      if (*record.dev_elas > best_elas) {
        best_elas = *record.dev_elas;
        best = model.params();
        report.selected_epoch = epoch;
      }
    } else {
      report.selected_epoch = epoch;
    }
    if (log) {
      *log << "epoch=" << epoch << " loss=" << std::setprecision(6) << record.loss;
      if (record.dev_elas) *log << " dev_elas=" << std::fixed << std::setprecision(2)
                                << 100.0 * *record.dev_elas << std::defaultfloat;
      *log << '\n';
    }
    report.epochs.push_back(record);
  }
  if (best) model.params() = std::move(*best);
  return report;
}

ExperimentResult TrainTwoStage(const std::vector<LanguageData>& languages,
                               const ExperimentOptions& options,
                               std::ostream* log) {
  if (languages.empty()) throw std::invalid_argument("no languages configured");
  std::mt19937_64 rng(options.seed);
  ExperimentResult result;

  if (options.generic.enabled) {
    std::vector<Sentence> train = Concatenate(languages, false);
    std::vector<Sentence> dev = Concatenate(languages, true);
    std::set<std::string> grammatical = HarvestGrammaticalSubtypes(train);
    PreparedCorpus corpus = PrepareCorpus(train, grammatical, options.lex);
    LogPreparation(log, "generic", corpus);
    Vocabularies vocab = CollectVocabularies(corpus);
    ScoreModel model(options.model, options.mode, vocab.words, vocab.labels);
    model.InitializeRandom(rng);
    WarnUnknownDevLabels(model, dev, grammatical, options.lex, log);
    result.generic = RunStage(std::move(model), train, dev, corpus,
                              options.generic, options, rng, "generic", log);
  }

  if (options.finetune.enabled) {
    for (const LanguageData& lang : languages) {
      const std::string stage = "finetune:" + lang.name;
      if (result.generic) {
        std::set<std::string> grammatical =
            HarvestGrammaticalSubtypes(Concatenate(languages, false));
        PreparedCorpus corpus = PrepareCorpus(lang.train, grammatical, options.lex);
        LogPreparation(log, stage, corpus);
        result.languages.emplace(
            lang.name, RunStage(result.generic->model, lang.train, lang.dev,
                                corpus, options.finetune, options,
                                rng, stage, log));
      } else {
        std::set<std::string> grammatical = HarvestGrammaticalSubtypes(lang.train);
        PreparedCorpus corpus = PrepareCorpus(lang.train, grammatical, options.lex);
        LogPreparation(log, stage, corpus);
        Vocabularies vocab = CollectVocabularies(corpus);
        ScoreModel model(options.model, options.mode, vocab.words, vocab.labels);
        model.InitializeRandom(rng);
        WarnUnknownDevLabels(model, lang.dev, grammatical, options.lex, log);
        StageOptions direct = options.finetune;
        direct.learning_rate = options.generic.learning_rate;
        result.languages.emplace(
            lang.name, RunStage(std::move(model), lang.train, lang.dev,
                                corpus, direct, options, rng, stage, log));
      }
    }
  }
  return result;
}

}  // namespace eud
