// Training loop (size-1 batches accumulated into steps, global-norm clipping,
// RAdam) and the two-stage generic -> per-language schedule.

#ifndef EUD_TRAIN_H_
#define EUD_TRAIN_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "eud/conllu.h"
#include "eud/eval.h"
#include "eud/labels.h"
#include "eud/optimizer.h"
#include "eud/pipeline.h"
#include "eud/scorer.h"

namespace eud {

struct TrainerOptions {
  int epochs = 30;
  int batch_size = 8;  // sentences accumulated per optimizer step
  double gradient_clip = 1.0;
  RAdamOptions optimizer;
};

struct EpochRecord {
  int epoch = 0;
  double loss = 0.0;  // summed over the epoch's forward passes
  std::optional<double> dev_elas;
};

struct TrainingReport {
  std::vector<EpochRecord> epochs;
  int selected_epoch = 0;  // best dev ELAS, or the last epoch without dev data
};

// Held-out data for model selection.
struct DevData {
  const std::vector<Sentence>* sentences = nullptr;
  const LemmaLexicon* lexicon = nullptr;
  LexicalizationOptions lex;
};

// Trains in place; the sentence order is shuffled with `rng` every epoch.
// With dev data the parameters of the best dev-ELAS epoch are restored.
TrainingReport Train(ScoreModel& model, const PreparedCorpus& corpus,
                     const TrainerOptions& options, std::mt19937_64& rng,
                     const DevData& dev = {}, std::ostream* log = nullptr);

// Summed loss over the corpus without updating anything.
LossValue CorpusLoss(const ScoreModel& model, const PreparedCorpus& corpus);

// ELAS of the model's parses against the sentences' own gold graphs.
EvalResult EvaluateElas(const ScoreModel& model, const LemmaLexicon& lexicon,
                        const std::vector<Sentence>& gold,
                        const ParseOptions& options = {});

struct LanguageData {
  std::string name;
  std::vector<Sentence> train;  // all treebanks of the language, concatenated
  std::vector<Sentence> dev;
};

struct StageOptions {
  bool enabled = true;
  int epochs = 30;
  double learning_rate = 2e-3;
};

struct ExperimentOptions {
  ModelConfig model;
  ParserMode mode = ParserMode::kTreeGraph;
  uint64_t seed = 1;
  int batch_size = 8;
  double gradient_clip = 1.0;
  double weight_decay = 0.0;
  StageOptions generic{true, 30, 2e-3};
  StageOptions finetune{true, 10, 2e-4};
  LexicalizationOptions lex;
};

struct TrainedModel {
  ScoreModel model;
  LemmaLexicon lexicon;
  TrainingReport report;
};

struct ExperimentResult {
  std::optional<TrainedModel> generic;
  std::map<std::string, TrainedModel> languages;
};

// Stage 1 trains one model on every language's training data concatenated.
// Stage 2 starts each language from the stage-1 parameters (or from scratch
// at the generic learning rate when stage 1 is disabled) and trains on that
// language alone. All randomness comes from one generator seeded with
// options.seed.
ExperimentResult TrainTwoStage(const std::vector<LanguageData>& languages,
                               const ExperimentOptions& options,
                               std::ostream* log = nullptr);

}  // namespace eud

#endif  // EUD_TRAIN_H_
