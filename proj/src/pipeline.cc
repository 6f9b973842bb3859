#include "eud/pipeline.h"

#include <algorithm>
#include <mutex>
#include <thread>

namespace eud {

namespace {

std::string Label(const PreparedSentence& s, size_t index) {
  return s.id.empty() ? "#" + std::to_string(index + 1) : s.id;
}

struct SentenceOutput {
  Sentence sentence;
  int collisions = 0;
  int relex_failures = 0;
};

SentenceOutput ParseOne(const ScoreModel& model, const LemmaLexicon& lexicon,
                        const Sentence& input, const ParseOptions& options) {
  SentenceOutput out{input, 0, 0};
  out.sentence.SetEnhanced(CollapsedGraph{input.size(), {}});
  std::vector<std::string> forms = input.Forms();
  if (forms.empty()) return out;
  ParseResult parsed = ParseWithModelMode(model, forms, options.decode);
  const SpanningTree* tree = parsed.tree.n > 0 ? &parsed.tree : nullptr;
  RelexResult relex = Relexicalize(input, parsed.graph, lexicon, tree, options.lex);
  CollapsedGraph split = SplitParallelEdges(relex.graph);
  out.sentence.SetEnhanced(split);
  out.collisions = parsed.collisions;
  out.relex_failures = relex.failures;
  if (options.write_tree && tree) {
    for (int j = 1; j <= tree->n; ++j) {
      Word& w = out.sentence.word(j);
      w.basic_head = SurfaceNode(tree->heads[j]);
      for (const Edge& e : relex.graph.edges) {
        if (e.head.major == tree->heads[j] && e.dep.major == j) {
          w.basic_deprel = SplitString(e.label, kMergeSeparator).front();
          break;
        }
      }
    }
  }
  return out;
}

}  // namespace

PreparedCorpus PrepareCorpus(const std::vector<Sentence>& sentences,
                             const std::set<std::string>& grammatical,
                             const LexicalizationOptions& options) {
  PreparedCorpus corpus;
  PreparationStats& stats = corpus.stats;
  for (size_t k = 0; k < sentences.size(); ++k) {
    const Sentence& s = sentences[k];
    ++stats.sentences;
    PreparedSentence p;
    p.id = s.SentId();
    if (s.size() == 0) {
      ++stats.skipped;
      continue;
    }
    p.forms = s.Forms();
    CollapseResult collapsed;
    try {
      collapsed = CollapseEmptyNodes(s.enhanced);
    } catch (const GraphError& e) {
      stats.warnings.push_back("W-COLLAPSE " + Label(p, k) + ": " + e.what());
      ++stats.skipped;
      continue;
    }
    stats.dropped_empty_edges += collapsed.dropped_edges;
    CollapsedGraph merged = MergeParallelEdges(collapsed.graph);
    DelexResult delex = Delexicalize(s, merged, grammatical, options);
    stats.delex_failures += delex.failures;
    stats.delex_placeholders += delex.placeholders;
    p.gold = delex.graph;
    p.gold.Normalize();
    try {
      SpanningTree tree = ExtractSpanningTree(s, p.gold);
      p.residual = ResidualEdges(p.gold, tree);
      p.tree = std::move(tree);
    } catch (const ExtractionError& e) {
      ++stats.extraction_failures;
      stats.warnings.push_back("W-EXTRACT " + Label(p, k) + ": " + e.what());
    }
    corpus.sentences.push_back(std::move(p));
  }
  return corpus;
}

Vocabularies CollectVocabularies(const PreparedCorpus& corpus) {
  std::set<std::string> words, labels;
  for (const PreparedSentence& s : corpus.sentences) {
    words.insert(s.forms.begin(), s.forms.end());
    for (const Edge& e : s.gold.edges) labels.insert(e.label);
  }
  return {{words.begin(), words.end()}, {labels.begin(), labels.end()}};
}

TrainingTargets MakeTargets(const ScoreModel& model, const PreparedSentence& s) {
  TrainingTargets t;
  std::vector<Edge> graph_edges = s.gold.edges;
  if (model.mode() == ParserMode::kTreeGraph && s.tree) {
    t.tree_heads = s.tree->heads;
    graph_edges = s.residual;
    for (int j = 1; j <= s.tree->n; ++j) t.graph_excluded.emplace_back(s.tree->heads[j], j);
  }
  for (const Edge& e : graph_edges) t.graph_positive.emplace_back(e.head.major, e.dep.major);
  for (const Edge& e : s.gold.edges) {
    std::optional<int> label = model.LabelIndex(e.label);
    if (!label) {
      throw VocabularyError("label '" + e.label + "' of sentence '" + s.id +
                            "' is not in the model's label vocabulary");
    }
    t.arcs.push_back({e.head.major, e.dep.major, *label});
  }
  return t;
}

std::vector<Sentence> ParseCorpus(const ScoreModel& model,
                                  const LemmaLexicon& lexicon,
                                  const std::vector<Sentence>& input,
                                  const ParseOptions& options,
                                  ParseStats* stats) {
  std::vector<SentenceOutput> outputs(input.size());
  const size_t workers = static_cast<size_t>(std::max(1, options.workers));
  if (workers == 1 || input.size() < 2) {
    for (size_t k = 0; k < input.size(); ++k) {
      outputs[k] = ParseOne(model, lexicon, input[k], options);
    }
  } else {
    std::vector<std::thread> threads;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          for (size_t k = w; k < input.size(); k += workers) {
            outputs[k] = ParseOne(model, lexicon, input[k], options);
          }
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      });
    }
    for (std::thread& t : threads) t.join();
    if (error) std::rethrow_exception(error);
  }
  std::vector<Sentence> result;
  result.reserve(outputs.size());
  for (size_t k = 0; k < outputs.size(); ++k) {
    if (stats) {
      stats->collisions += outputs[k].collisions;
      stats->relex_failures += outputs[k].relex_failures;
      const std::string id = input[k].SentId().empty() ? "#" + std::to_string(k + 1)
                                                       : input[k].SentId();
      if (outputs[k].collisions) {
        stats->warnings.push_back("W-COLLISION " + id + ": " +
                                  std::to_string(outputs[k].collisions) +
                                  " extra edge(s) dropped on tree pairs");
      }
      if (outputs[k].relex_failures) {
        stats->warnings.push_back("W-RELEX " + id + ": " +
                                  std::to_string(outputs[k].relex_failures) +
                                  " placeholder(s) without a matching child");
      }
    }
    result.push_back(std::move(outputs[k].sentence));
  }
  return result;
}

}  // namespace eud
