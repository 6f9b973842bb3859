// Trainable arc and label scorer: word embeddings and a bidirectional
// recurrent encoder, softmax layer mixing, ReLU projections, and deep biaffine
// functions for tree arcs, extra graph edges and each relation label. All
// arithmetic is double precision with hand-written backpropagation.

#ifndef EUD_SCORER_H_
#define EUD_SCORER_H_

#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace eud {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct ModelConfig {
  int embedding_dim = 64;  // d; must be even (two recurrent directions)
  int recurrent_layers = 2;
  int arc_hidden = 64;  // projection size of the tree and graph DBFs
  int rel_hidden = 32;  // projection size of each relation DBF
  int unk_buckets = 16;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// How the graph DBF is supervised and decoded.
enum class ParserMode {
  kTreeGraph,  // tree DBF + extra edges; graph DBF sees residual edges only
  kGraphFix,   // graph DBF scores every edge; connectivity repaired afterwards
};

std::string_view ParserModeName(ParserMode mode);
std::optional<ParserMode> ParseParserMode(std::string_view name);

// One deep biaffine function:
//   DBF(i, j) = v_i^T U v'_j + b_head . v_i + b_mod . v'_j + b
//   v_i = ReLU(W_head sum_l softmax(alpha_head)_l x_i^l + c_head)
// and v'_j likewise with the "mod" parameters.
struct DbfParams {
  VectorXd alpha_head, alpha_mod;  // one weight per encoder layer
  MatrixXd w_head, w_mod;          // hidden x d
  VectorXd proj_bias_head, proj_bias_mod;
  MatrixXd u;                      // hidden x hidden
  VectorXd bias_head, bias_mod;
  double bias = 0.0;

  static DbfParams Zeros(int num_layers, int dim, int hidden);
  int hidden() const { return static_cast<int>(u.rows()); }
};

struct RecurrentDirection {
  MatrixXd w_in;   // (d/2) x d
  MatrixXd w_rec;  // (d/2) x (d/2)
  VectorXd bias;
};

struct RecurrentLayer {
  RecurrentDirection forward, backward;
};

struct ModelParams {
  MatrixXd embeddings;  // d x (vocab + unk buckets)
  VectorXd root;        // position-0 input vector
  std::vector<RecurrentLayer> layers;
  DbfParams tree, graph;
  std::vector<DbfParams> rel;  // one per label, in label-vocabulary order

  static ModelParams Zeros(const ModelConfig& config, int embedding_rows,
                           int num_labels);
  void SetZero();
  size_t size() const;
};

// Calls f(name, data, count) for every parameter block in a fixed order.
template <typename Params, typename F>
void ForEachDbfBlock(Params& p, const std::string& prefix, F&& f) {
  f(prefix + ".alpha_head", p.alpha_head.data(), p.alpha_head.size());
  f(prefix + ".alpha_mod", p.alpha_mod.data(), p.alpha_mod.size());
  f(prefix + ".w_head", p.w_head.data(), p.w_head.size());
  f(prefix + ".w_mod", p.w_mod.data(), p.w_mod.size());
  f(prefix + ".proj_bias_head", p.proj_bias_head.data(), p.proj_bias_head.size());
  f(prefix + ".proj_bias_mod", p.proj_bias_mod.data(), p.proj_bias_mod.size());
  f(prefix + ".u", p.u.data(), p.u.size());
  f(prefix + ".bias_head", p.bias_head.data(), p.bias_head.size());
  f(prefix + ".bias_mod", p.bias_mod.data(), p.bias_mod.size());
  f(prefix + ".bias", &p.bias, Eigen::Index{1});
}

template <typename Params, typename F>
void ForEachBlock(Params& p, F&& f) {
  f(std::string("embeddings"), p.embeddings.data(), p.embeddings.size());
  f(std::string("root"), p.root.data(), p.root.size());
  for (size_t l = 0; l < p.layers.size(); ++l) {
    const std::string prefix = "rnn" + std::to_string(l + 1);
    auto& layer = p.layers[l];
    f(prefix + ".fw.w_in", layer.forward.w_in.data(), layer.forward.w_in.size());
    f(prefix + ".fw.w_rec", layer.forward.w_rec.data(), layer.forward.w_rec.size());
    f(prefix + ".fw.bias", layer.forward.bias.data(), layer.forward.bias.size());
    f(prefix + ".bw.w_in", layer.backward.w_in.data(), layer.backward.w_in.size());
    f(prefix + ".bw.w_rec", layer.backward.w_rec.data(), layer.backward.w_rec.size());
    f(prefix + ".bw.bias", layer.backward.bias.data(), layer.backward.bias.size());
  }
  ForEachDbfBlock(p.tree, "tree", f);
  ForEachDbfBlock(p.graph, "graph", f);
  for (size_t r = 0; r < p.rel.size(); ++r) {
    ForEachDbfBlock(p.rel[r], "rel" + std::to_string(r), f);
  }
}

std::vector<double> Flatten(const ModelParams& params);
void Unflatten(std::span<const double> values, ModelParams& params);

// Encoder layers 0..L, each d x (n+1); column 0 is the root position.
// Layer 0 is the embedding layer.
struct EncoderOutput {
  std::vector<MatrixXd> layers;

  int positions() const { return layers.empty() ? 0 : static_cast<int>(layers[0].cols()); }
  int width() const { return layers.empty() ? 0 : static_cast<int>(layers[0].rows()); }
};

// softmax(alpha).
VectorXd LayerWeights(const VectorXd& alpha);
// Position-wise sum_l softmax(alpha)_l * layer_l.
MatrixXd MixLayers(const EncoderOutput& encoded, const VectorXd& alpha);

// Single DBF score for head position i and dependent position j.
double DbfScore(const DbfParams& p, const EncoderOutput& encoded, int i, int j);

// Head-by-dependent score table over heads 0..n and dependents 1..n.
class ArcScores {
 public:
  ArcScores() = default;
  explicit ArcScores(int n) : n_(n), scores_(MatrixXd::Zero(n + 1, n)) {}
  // From a full (n+1) x (n+1) matrix; column 0 is discarded.
  static ArcScores FromSquare(const MatrixXd& square);

  int n() const { return n_; }
  double operator()(int head, int dep) const { return scores_(head, dep - 1); }
  double& operator()(int head, int dep) { return scores_(head, dep - 1); }
  const MatrixXd& matrix() const { return scores_; }

 private:
  int n_ = 0;
  MatrixXd scores_;
};

struct SentenceScores {
  ArcScores tree;
  ArcScores graph;
  std::vector<ArcScores> rel;  // per label

  int n() const { return tree.n(); }
  VectorXd RelVector(int head, int dep) const;
};

struct LabeledArc {
  int head = 0;
  int dep = 0;
  int label = 0;  // index into the label vocabulary
};

// Supervision for one sentence.
struct TrainingTargets {
  // heads[j] for j in 1..n (index 0 unused); absent when extraction failed.
  std::optional<std::vector<int>> tree_heads;
  // Pairs labeled 1 for the graph DBF.
  std::vector<std::pair<int, int>> graph_positive;
  // Pairs left out of the graph loss entirely.
  std::vector<std::pair<int, int>> graph_excluded;
  std::vector<LabeledArc> arcs;
};

struct LossValue {
  double tree = 0.0;
  double graph = 0.0;
  double rel = 0.0;
  double total() const { return tree + graph + rel; }
};

class ScoreModel {
 public:
  ScoreModel(ModelConfig config, ParserMode mode,
             std::vector<std::string> word_vocab,
             std::vector<std::string> label_vocab);

  // Xavier-style initialization; the only source of randomness in a model.
  void InitializeRandom(std::mt19937_64& rng);

  const ModelConfig& config() const { return config_; }
  ParserMode mode() const { return mode_; }
  const std::vector<std::string>& word_vocab() const { return word_vocab_; }
  const std::vector<std::string>& label_vocab() const { return label_vocab_; }
  const ModelParams& params() const { return params_; }
  ModelParams& params() { return params_; }

  // Known words map to their vocabulary row; others to a hashed UNK row.
  int WordIndex(std::string_view form) const;
  std::optional<int> LabelIndex(std::string_view label) const;

  EncoderOutput Encode(std::span<const std::string> forms) const;
  SentenceScores Score(std::span<const std::string> forms) const;

  // Summed tree cross-entropy, graph binary cross-entropy and relation
  // cross-entropy. Gradients are added into *grad when it is non-null.
  LossValue Loss(std::span<const std::string> forms,
                 const TrainingTargets& targets, ModelParams* grad) const;

  friend bool operator==(const ScoreModel& a, const ScoreModel& b);

 private:
  ModelConfig config_;
  ParserMode mode_;
  std::vector<std::string> word_vocab_;
  std::vector<std::string> label_vocab_;
  std::unordered_map<std::string, int> word_index_;
  std::unordered_map<std::string, int> label_index_;
  ModelParams params_;
};

// 64-bit FNV-1a; stable across platforms, used for UNK buckets.
uint64_t StableHash(std::string_view text);

}  // namespace eud

#endif  // EUD_SCORER_H_
