#include "support/toy_training.h"

#include <random>

namespace eud::testing {

ModelConfig SmallConfig() {
  ModelConfig c;
  c.embedding_dim = 32;
  c.recurrent_layers = 2;
  c.arc_hidden = 32;
  c.rel_hidden = 16;
  c.unk_buckets = 4;
  return c;
}

ToyRun TrainToy(const std::vector<Sentence>& train, const ToyRunOptions& options) {
  ToyRun run;
  run.lexicon = LemmaLexicon::Build(train);
  run.corpus = PrepareCorpus(train, HarvestGrammaticalSubtypes(train));
  Vocabularies vocab = CollectVocabularies(run.corpus);
  std::mt19937_64 rng(options.seed);
  run.model.emplace(options.config, options.mode, vocab.words, vocab.labels);
  run.model->InitializeRandom(rng);
  TrainerOptions trainer;
  trainer.epochs = options.epochs;
  trainer.batch_size = options.batch_size;
  trainer.optimizer.learning_rate = options.learning_rate;
  DevData dev;
  if (options.dev) {
    dev.sentences = options.dev;
    dev.lexicon = &run.lexicon;
  }
  run.report = Train(*run.model, run.corpus, trainer, rng, dev, options.log);
  return run;
}

double ParseElas(const ScoreModel& model, const LemmaLexicon& lexicon,
                 const std::vector<Sentence>& gold) {
  return EvaluateElas(model, lexicon, gold).f1();
}

}  // namespace eud::testing
