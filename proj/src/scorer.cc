#include "eud/scorer.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace eud {

namespace {

// Per-position projections of one DBF.
struct DbfForward {
  VectorXd weights_head, weights_mod;
  MatrixXd mix_head, mix_mod;
  MatrixXd head, mod;  // post-ReLU, hidden x (n+1)
};

MatrixXd Relu(const MatrixXd& x) { return x.cwiseMax(0.0); }

DbfForward ProjectDbf(const DbfParams& p, const EncoderOutput& encoded) {
  DbfForward f;
  f.weights_head = LayerWeights(p.alpha_head);
  f.weights_mod = LayerWeights(p.alpha_mod);
  f.mix_head = MixLayers(encoded, p.alpha_head);
  f.mix_mod = MixLayers(encoded, p.alpha_mod);
  MatrixXd pre_head = p.w_head * f.mix_head;
  pre_head.colwise() += p.proj_bias_head;
  MatrixXd pre_mod = p.w_mod * f.mix_mod;
  pre_mod.colwise() += p.proj_bias_mod;
  f.head = Relu(pre_head);
  f.mod = Relu(pre_mod);
  return f;
}

// Entry (i, j) scores head position i against dependent position j.
MatrixXd DbfSquare(const DbfParams& p, const DbfForward& f) {
  MatrixXd s = f.head.transpose() * p.u * f.mod;
  VectorXd head_term = f.head.transpose() * p.bias_head;
  VectorXd mod_term = f.mod.transpose() * p.bias_mod;
  s.colwise() += head_term;
  s.rowwise() += mod_term.transpose();
  s.array() += p.bias;
  return s;
}

void BackpropProjection(const MatrixXd& activated, const MatrixXd& d_activated,
                        const MatrixXd& w, const MatrixXd& mix,
                        const VectorXd& weights, const EncoderOutput& encoded,
                        MatrixXd& grad_w, VectorXd& grad_bias,
                        VectorXd& grad_alpha, std::vector<MatrixXd>& d_layers) {
  MatrixXd d_pre = d_activated.cwiseProduct(
      (activated.array() > 0.0).cast<double>().matrix());
  grad_w.noalias() += d_pre * mix.transpose();
  grad_bias += d_pre.rowwise().sum();
  MatrixXd d_mix = w.transpose() * d_pre;
  const int num_layers = static_cast<int>(encoded.layers.size());
  VectorXd d_weights(num_layers);
  for (int l = 0; l < num_layers; ++l) {
    d_weights(l) = d_mix.cwiseProduct(encoded.layers[l]).sum();
    d_layers[l] += weights(l) * d_mix;
  }
  const double mean = weights.dot(d_weights);
  for (int l = 0; l < num_layers; ++l) {
    grad_alpha(l) += weights(l) * (d_weights(l) - mean);
  }
}

void BackpropDbf(const DbfParams& p, const EncoderOutput& encoded,
                 const DbfForward& f, const MatrixXd& d_scores, DbfParams& g,
                 std::vector<MatrixXd>& d_layers) {
  VectorXd row_sums = d_scores.rowwise().sum();
  VectorXd col_sums = d_scores.colwise().sum().transpose();
  g.u.noalias() += f.head * d_scores * f.mod.transpose();
  MatrixXd d_head = p.u * f.mod * d_scores.transpose() +
                    p.bias_head * row_sums.transpose();
  MatrixXd d_mod = p.u.transpose() * f.head * d_scores +
                   p.bias_mod * col_sums.transpose();
  g.bias_head += f.head * row_sums;
  g.bias_mod += f.mod * col_sums;
  g.bias += d_scores.sum();
  BackpropProjection(f.head, d_head, p.w_head, f.mix_head, f.weights_head,
                     encoded, g.w_head, g.proj_bias_head, g.alpha_head, d_layers);
  BackpropProjection(f.mod, d_mod, p.w_mod, f.mix_mod, f.weights_mod, encoded,
                     g.w_mod, g.proj_bias_mod, g.alpha_mod, d_layers);
}

MatrixXd RunDirection(const RecurrentDirection& dir, const MatrixXd& input,
                      bool reverse) {
  const int steps = static_cast<int>(input.cols());
  MatrixXd pre = dir.w_in * input;
  pre.colwise() += dir.bias;
  MatrixXd hidden(dir.w_rec.rows(), steps);
  for (int k = 0; k < steps; ++k) {
    const int t = reverse ? steps - 1 - k : k;
    VectorXd z = pre.col(t);
    if (k > 0) z.noalias() += dir.w_rec * hidden.col(reverse ? t + 1 : t - 1);
    hidden.col(t) = z.array().tanh().matrix();
  }
  return hidden;
}

void BackpropDirection(const RecurrentDirection& dir, const MatrixXd& input,
                       const MatrixXd& hidden, const MatrixXd& d_hidden,
                       bool reverse, RecurrentDirection& g, MatrixXd& d_input) {
  const int steps = static_cast<int>(input.cols());
  MatrixXd d_pre(hidden.rows(), steps);
  VectorXd carry = VectorXd::Zero(hidden.rows());
  for (int k = steps - 1; k >= 0; --k) {
    const int t = reverse ? steps - 1 - k : k;
    VectorXd dh = d_hidden.col(t) + carry;
    VectorXd dz = dh.cwiseProduct(
        (1.0 - hidden.col(t).array().square()).matrix());
    d_pre.col(t) = dz;
    if (k > 0) {
      g.w_rec.noalias() += dz * hidden.col(reverse ? t + 1 : t - 1).transpose();
      carry.noalias() = dir.w_rec.transpose() * dz;
    }
  }
  g.w_in.noalias() += d_pre * input.transpose();
  g.bias += d_pre.rowwise().sum();
  d_input.noalias() += dir.w_in.transpose() * d_pre;
}

EncoderOutput RunEncoder(const ModelParams& p, const std::vector<int>& ids) {
  const int positions = static_cast<int>(ids.size()) + 1;
  const int d = static_cast<int>(p.root.size());
  EncoderOutput out;
  MatrixXd x0(d, positions);
  x0.col(0) = p.root;
  for (int t = 1; t < positions; ++t) x0.col(t) = p.embeddings.col(ids[t - 1]);
  out.layers.push_back(std::move(x0));
  for (const RecurrentLayer& layer : p.layers) {
    const MatrixXd& input = out.layers.back();
    MatrixXd fw = RunDirection(layer.forward, input, false);
    MatrixXd bw = RunDirection(layer.backward, input, true);
    MatrixXd next(d, positions);
    next << fw, bw;
    out.layers.push_back(std::move(next));
  }
  return out;
}

void BackpropEncoder(const ModelParams& p, const std::vector<int>& ids,
                     const EncoderOutput& out, std::vector<MatrixXd>& d_layers,
                     ModelParams& g) {
  const int half = static_cast<int>(p.root.size()) / 2;
  for (int l = static_cast<int>(p.layers.size()); l >= 1; --l) {
    const MatrixXd& input = out.layers[l - 1];
    const MatrixXd& hidden = out.layers[l];
    const MatrixXd& d_hidden = d_layers[l];
    MatrixXd d_input = MatrixXd::Zero(input.rows(), input.cols());
    BackpropDirection(p.layers[l - 1].forward, input, hidden.topRows(half),
                      d_hidden.topRows(half), false, g.layers[l - 1].forward,
                      d_input);
    BackpropDirection(p.layers[l - 1].backward, input, hidden.bottomRows(half),
                      d_hidden.bottomRows(half), true, g.layers[l - 1].backward,
                      d_input);
    d_layers[l - 1] += d_input;
  }
  g.root += d_layers[0].col(0);
  for (size_t t = 1; t <= ids.size(); ++t) {
    g.embeddings.col(ids[t - 1]) += d_layers[0].col(static_cast<Eigen::Index>(t));
  }
}

double Softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void InitUniform(MatrixXd& m, double limit, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = dist(rng);
}

void InitUniform(VectorXd& v, double limit, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = dist(rng);
}

double Xavier(Eigen::Index fan_out, Eigen::Index fan_in) {
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

void InitDbf(DbfParams& p, std::mt19937_64& rng) {
  InitUniform(p.w_head, Xavier(p.w_head.rows(), p.w_head.cols()), rng);
  InitUniform(p.w_mod, Xavier(p.w_mod.rows(), p.w_mod.cols()), rng);
  InitUniform(p.u, 0.5 * Xavier(p.u.rows(), p.u.cols()), rng);
  p.alpha_head.setZero();
  p.alpha_mod.setZero();
  p.proj_bias_head.setZero();
  p.proj_bias_mod.setZero();
  p.bias_head.setZero();
  p.bias_mod.setZero();
  p.bias = 0.0;
}

}  // namespace

std::string_view ParserModeName(ParserMode mode) {
  return mode == ParserMode::kTreeGraph ? "tree-graph" : "graph-fix";
}

std::optional<ParserMode> ParseParserMode(std::string_view name) {
  if (name == "tree-graph") return ParserMode::kTreeGraph;
  if (name == "graph-fix") return ParserMode::kGraphFix;
  return std::nullopt;
}

DbfParams DbfParams::Zeros(int num_layers, int dim, int hidden) {
  DbfParams p;
  p.alpha_head = VectorXd::Zero(num_layers);
  p.alpha_mod = VectorXd::Zero(num_layers);
  p.w_head = MatrixXd::Zero(hidden, dim);
  p.w_mod = MatrixXd::Zero(hidden, dim);
  p.proj_bias_head = VectorXd::Zero(hidden);
  p.proj_bias_mod = VectorXd::Zero(hidden);
  p.u = MatrixXd::Zero(hidden, hidden);
  p.bias_head = VectorXd::Zero(hidden);
  p.bias_mod = VectorXd::Zero(hidden);
  return p;
}

ModelParams ModelParams::Zeros(const ModelConfig& config, int embedding_rows,
                               int num_labels) {
  const int d = config.embedding_dim;
  const int half = d / 2;
  ModelParams p;
  p.embeddings = MatrixXd::Zero(d, embedding_rows);
  p.root = VectorXd::Zero(d);
  for (int l = 0; l < config.recurrent_layers; ++l) {
    RecurrentLayer layer;
    for (RecurrentDirection* dir : {&layer.forward, &layer.backward}) {
      dir->w_in = MatrixXd::Zero(half, d);
      dir->w_rec = MatrixXd::Zero(half, half);
      dir->bias = VectorXd::Zero(half);
    }
    p.layers.push_back(std::move(layer));
  }
  const int num_layers = config.recurrent_layers + 1;
  p.tree = DbfParams::Zeros(num_layers, d, config.arc_hidden);
  p.graph = DbfParams::Zeros(num_layers, d, config.arc_hidden);
  for (int r = 0; r < num_labels; ++r) {
    p.rel.push_back(DbfParams::Zeros(num_layers, d, config.rel_hidden));
  }
  return p;
}

void ModelParams::SetZero() {
  ForEachBlock(*this, [](const std::string&, double* data, Eigen::Index count) {
    std::fill(data, data + count, 0.0);
  });
}

size_t ModelParams::size() const {
  size_t total = 0;
  ForEachBlock(*this, [&](const std::string&, const double*, Eigen::Index count) {
    total += static_cast<size_t>(count);
  });
  return total;
}

std::vector<double> Flatten(const ModelParams& params) {
  std::vector<double> values;
  values.reserve(params.size());
  ForEachBlock(params, [&](const std::string&, const double* data, Eigen::Index count) {
    values.insert(values.end(), data, data + count);
  });
  return values;
}

void Unflatten(std::span<const double> values, ModelParams& params) {
  if (values.size() != params.size()) {
    throw std::invalid_argument("parameter count mismatch");
  }
  size_t offset = 0;
  ForEachBlock(params, [&](const std::string&, double* data, Eigen::Index count) {
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(offset), count, data);
    offset += static_cast<size_t>(count);
  });
}

VectorXd LayerWeights(const VectorXd& alpha) {
  VectorXd w = (alpha.array() - alpha.maxCoeff()).exp().matrix();
  return w / w.sum();
}

MatrixXd MixLayers(const EncoderOutput& encoded, const VectorXd& alpha) {
  if (alpha.size() != static_cast<Eigen::Index>(encoded.layers.size())) {
    throw std::invalid_argument("layer weight count does not match encoder depth");
  }
  VectorXd w = LayerWeights(alpha);
  MatrixXd mixed = w(0) * encoded.layers[0];
  for (size_t l = 1; l < encoded.layers.size(); ++l) {
    mixed += w(static_cast<Eigen::Index>(l)) * encoded.layers[l];
  }
  return mixed;
}

double DbfScore(const DbfParams& p, const EncoderOutput& encoded, int i, int j) {
  DbfForward f = ProjectDbf(p, encoded);
  VectorXd vh = f.head.col(i);
  VectorXd vm = f.mod.col(j);
  return vh.dot(p.u * vm) + p.bias_head.dot(vh) + p.bias_mod.dot(vm) + p.bias;
}

ArcScores ArcScores::FromSquare(const MatrixXd& square) {
  ArcScores a(static_cast<int>(square.rows()) - 1);
  a.scores_ = square.rightCols(square.cols() - 1);
  return a;
}

VectorXd SentenceScores::RelVector(int head, int dep) const {
  VectorXd v(static_cast<Eigen::Index>(rel.size()));
  for (size_t r = 0; r < rel.size(); ++r) {
    v(static_cast<Eigen::Index>(r)) = rel[r](head, dep);
  }
  return v;
}

ScoreModel::ScoreModel(ModelConfig config, ParserMode mode,
                       std::vector<std::string> word_vocab,
                       std::vector<std::string> label_vocab)
    : config_(config),
      mode_(mode),
      word_vocab_(std::move(word_vocab)),
      label_vocab_(std::move(label_vocab)) {
  if (config_.embedding_dim <= 0 || config_.embedding_dim % 2 != 0) {
    throw std::invalid_argument("embedding_dim must be positive and even");
  }
  if (config_.recurrent_layers < 0 || config_.arc_hidden <= 0 ||
      config_.rel_hidden <= 0 || config_.unk_buckets <= 0) {
    throw std::invalid_argument("invalid model dimensions");
  }
  if (label_vocab_.empty()) throw std::invalid_argument("empty label vocabulary");
  for (size_t k = 0; k < word_vocab_.size(); ++k) {
    if (!word_index_.emplace(word_vocab_[k], static_cast<int>(k)).second) {
      throw std::invalid_argument("duplicate word in vocabulary: " + word_vocab_[k]);
    }
  }
  for (size_t k = 0; k < label_vocab_.size(); ++k) {
    if (!label_index_.emplace(label_vocab_[k], static_cast<int>(k)).second) {
      throw std::invalid_argument("duplicate label in vocabulary: " + label_vocab_[k]);
    }
  }
  params_ = ModelParams::Zeros(
      config_, static_cast<int>(word_vocab_.size()) + config_.unk_buckets,
      static_cast<int>(label_vocab_.size()));
}

void ScoreModel::InitializeRandom(std::mt19937_64& rng) {
  const double embed_scale = 1.0 / std::sqrt(static_cast<double>(config_.embedding_dim));
  InitUniform(params_.embeddings, embed_scale, rng);
  InitUniform(params_.root, embed_scale, rng);
  for (RecurrentLayer& layer : params_.layers) {
    for (RecurrentDirection* dir : {&layer.forward, &layer.backward}) {
      InitUniform(dir->w_in, Xavier(dir->w_in.rows(), dir->w_in.cols()), rng);
      InitUniform(dir->w_rec, Xavier(dir->w_rec.rows(), dir->w_rec.cols()), rng);
      dir->bias.setZero();
    }
  }
  InitDbf(params_.tree, rng);
  InitDbf(params_.graph, rng);
  for (DbfParams& rel : params_.rel) InitDbf(rel, rng);
}

uint64_t StableHash(std::string_view text) {
  uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

int ScoreModel::WordIndex(std::string_view form) const {
  auto it = word_index_.find(std::string(form));
  if (it != word_index_.end()) return it->second;
  return static_cast<int>(word_vocab_.size()) +
         static_cast<int>(StableHash(form) % static_cast<uint64_t>(config_.unk_buckets));
}

std::optional<int> ScoreModel::LabelIndex(std::string_view label) const {
  auto it = label_index_.find(std::string(label));
  if (it == label_index_.end()) return std::nullopt;
  return it->second;
}

EncoderOutput ScoreModel::Encode(std::span<const std::string> forms) const {
  std::vector<int> ids;
  ids.reserve(forms.size());
  for (const std::string& f : forms) ids.push_back(WordIndex(f));
  return RunEncoder(params_, ids);
}

SentenceScores ScoreModel::Score(std::span<const std::string> forms) const {
  if (forms.empty()) throw std::invalid_argument("cannot score an empty sentence");
  EncoderOutput encoded = Encode(forms);
  SentenceScores scores;
  scores.tree = ArcScores::FromSquare(DbfSquare(params_.tree, ProjectDbf(params_.tree, encoded)));
  scores.graph = ArcScores::FromSquare(DbfSquare(params_.graph, ProjectDbf(params_.graph, encoded)));
  for (const DbfParams& rel : params_.rel) {
    scores.rel.push_back(ArcScores::FromSquare(DbfSquare(rel, ProjectDbf(rel, encoded))));
  }
  return scores;
}

LossValue ScoreModel::Loss(std::span<const std::string> forms,
                           const TrainingTargets& targets,
                           ModelParams* grad) const {
  if (forms.empty()) throw std::invalid_argument("cannot score an empty sentence");
  const int n = static_cast<int>(forms.size());
  std::vector<int> ids;
  for (const std::string& f : forms) ids.push_back(WordIndex(f));
  EncoderOutput encoded = RunEncoder(params_, ids);
  std::vector<MatrixXd> d_layers;
  if (grad) {
    for (const MatrixXd& layer : encoded.layers) {
      d_layers.push_back(MatrixXd::Zero(layer.rows(), layer.cols()));
    }
  }
  LossValue loss;

  if (targets.tree_heads) {
    const std::vector<int>& heads = *targets.tree_heads;
    if (static_cast<int>(heads.size()) != n + 1) {
      throw std::invalid_argument("tree target length does not match sentence");
    }
    DbfForward f = ProjectDbf(params_.tree, encoded);
    MatrixXd s = DbfSquare(params_.tree, f);
    MatrixXd ds = MatrixXd::Zero(n + 1, n + 1);
    for (int j = 1; j <= n; ++j) {
      double max_score = -std::numeric_limits<double>::infinity();
      for (int i = 0; i <= n; ++i) {
        if (i != j) max_score = std::max(max_score, s(i, j));
      }
      double sum = 0.0;
      for (int i = 0; i <= n; ++i) {
        if (i != j) sum += std::exp(s(i, j) - max_score);
      }
      const double log_z = max_score + std::log(sum);
      loss.tree += log_z - s(heads[j], j);
      for (int i = 0; i <= n; ++i) {
        if (i == j) continue;
        ds(i, j) = std::exp(s(i, j) - log_z) - (i == heads[j] ? 1.0 : 0.0);
      }
    }
    if (grad) BackpropDbf(params_.tree, encoded, f, ds, grad->tree, d_layers);
  }

  {
    Eigen::MatrixXi state = Eigen::MatrixXi::Zero(n + 1, n + 1);  // 1 pos, -1 skip
    for (auto [i, j] : targets.graph_positive) state(i, j) = 1;
    for (auto [i, j] : targets.graph_excluded) state(i, j) = -1;
    DbfForward f = ProjectDbf(params_.graph, encoded);
    MatrixXd s = DbfSquare(params_.graph, f);
    MatrixXd ds = MatrixXd::Zero(n + 1, n + 1);
    for (int i = 0; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) {
        if (i == j || state(i, j) < 0) continue;
        const double y = state(i, j) > 0 ? 1.0 : 0.0;
        loss.graph += Softplus(s(i, j)) - y * s(i, j);
        ds(i, j) = Sigmoid(s(i, j)) - y;
      }
    }
    if (grad) BackpropDbf(params_.graph, encoded, f, ds, grad->graph, d_layers);
  }

  if (!targets.arcs.empty()) {
    const int num_labels = static_cast<int>(params_.rel.size());
    std::vector<DbfForward> forwards;
    std::vector<MatrixXd> squares;
    for (const DbfParams& rel : params_.rel) {
      forwards.push_back(ProjectDbf(rel, encoded));
      squares.push_back(DbfSquare(rel, forwards.back()));
    }
    std::vector<MatrixXd> ds(num_labels, MatrixXd::Zero(n + 1, n + 1));
    VectorXd v(num_labels);
    for (const LabeledArc& arc : targets.arcs) {
      if (arc.label < 0 || arc.label >= num_labels) {
        throw std::invalid_argument("arc label index out of range");
      }
      for (int r = 0; r < num_labels; ++r) v(r) = squares[r](arc.head, arc.dep);
      const double max_score = v.maxCoeff();
      const double log_z = max_score + std::log((v.array() - max_score).exp().sum());
      loss.rel += log_z - v(arc.label);
      for (int r = 0; r < num_labels; ++r) {
        ds[r](arc.head, arc.dep) += std::exp(v(r) - log_z) - (r == arc.label ? 1.0 : 0.0);
      }
    }
    if (grad) {
      for (int r = 0; r < num_labels; ++r) {
        BackpropDbf(params_.rel[r], encoded, forwards[r], ds[r], grad->rel[r], d_layers);
      }
    }
  }

  if (grad) BackpropEncoder(params_, ids, encoded, d_layers, *grad);
  return loss;
}

bool operator==(const ScoreModel& a, const ScoreModel& b) {
  return a.config_ == b.config_ && a.mode_ == b.mode_ &&
         a.word_vocab_ == b.word_vocab_ && a.label_vocab_ == b.label_vocab_ &&
         Flatten(a.params_) == Flatten(b.params_);
}

}  // namespace eud
