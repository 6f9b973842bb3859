#include "eud/model_io.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace eud {

namespace {

constexpr char kMagic[8] = {'E', 'U', 'D', 'P', 'A', 'R', 'S', 'E'};
constexpr uint32_t kMaxStringLength = 1u << 20;

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void U32(uint32_t v) { Bytes(v, 4); }
  void U64(uint64_t v) { Bytes(v, 8); }
  void I32(int32_t v) { U32(static_cast<uint32_t>(v)); }
  void F64(double v) { U64(std::bit_cast<uint64_t>(v)); }
  void Str(const std::string& s) {
    U32(static_cast<uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  void Strings(const std::vector<std::string>& list) {
    U32(static_cast<uint32_t>(list.size()));
    for (const std::string& s : list) Str(s);
  }

 private:
  void Bytes(uint64_t v, int count) {
    char buf[8];
    for (int k = 0; k < count; ++k) buf[k] = static_cast<char>((v >> (8 * k)) & 0xff);
    out_.write(buf, count);
  }
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  uint32_t U32() { return static_cast<uint32_t>(Bytes(4)); }
  uint64_t U64() { return Bytes(8); }
  int32_t I32() { return static_cast<int32_t>(U32()); }
  double F64() { return std::bit_cast<double>(U64()); }
  std::string Str() {
    uint32_t size = U32();
    if (size > kMaxStringLength) throw ModelFormatError("string length out of range");
    std::string s(size, '\0');
    Read(s.data(), size);
    return s;
  }
  std::vector<std::string> Strings() {
    uint32_t count = U32();
    std::vector<std::string> list;
    for (uint32_t k = 0; k < count; ++k) list.push_back(Str());
    return list;
  }
  void Read(char* data, size_t size) {
    in_.read(data, static_cast<std::streamsize>(size));
    if (static_cast<size_t>(in_.gcount()) != size) {
      throw ModelFormatError("truncated model file");
    }
  }

 private:
  uint64_t Bytes(int count) {
    unsigned char buf[8];
    Read(reinterpret_cast<char*>(buf), static_cast<size_t>(count));
    uint64_t v = 0;
    for (int k = 0; k < count; ++k) v |= static_cast<uint64_t>(buf[k]) << (8 * k);
    return v;
  }
  std::istream& in_;
};

}  // namespace

void SaveModel(const ScoreModel& model, std::ostream& out) {
  if (model.label_vocab().empty()) throw ModelFormatError("empty label vocabulary");
  Writer w(out);
  out.write(kMagic, sizeof(kMagic));
  w.U32(kModelFormatVersion);
  w.U32(model.mode() == ParserMode::kTreeGraph ? 0 : 1);
  const ModelConfig& c = model.config();
  w.I32(c.embedding_dim);
  w.I32(c.recurrent_layers);
  w.I32(c.arc_hidden);
  w.I32(c.rel_hidden);
  w.I32(c.unk_buckets);
  w.Strings(model.word_vocab());
  w.Strings(model.label_vocab());
  uint32_t blocks = 0;
  ForEachBlock(model.params(), [&](const std::string&, const double*, Eigen::Index) { ++blocks; });
  w.U32(blocks);
  ForEachBlock(model.params(), [&](const std::string& name, const double* data, Eigen::Index count) {
    w.Str(name);
    w.U64(static_cast<uint64_t>(count));
    for (Eigen::Index k = 0; k < count; ++k) w.F64(data[k]);
  });
  if (!out) throw ModelFormatError("write failed");
}

void SaveModel(const ScoreModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelFormatError("cannot write " + path);
  SaveModel(model, out);
}

ScoreModel LoadModel(std::istream& in) {
  Reader r(in);
  char magic[sizeof(kMagic)];
  r.Read(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ModelFormatError("not a model file (bad magic bytes)");
  }
  uint32_t version = r.U32();
  if (version != kModelFormatVersion) {
    throw ModelFormatError("unsupported model format version " + std::to_string(version));
  }
  uint32_t mode = r.U32();
  if (mode > 1) throw ModelFormatError("unknown parser mode");
  ModelConfig c;
  c.embedding_dim = r.I32();
  c.recurrent_layers = r.I32();
  c.arc_hidden = r.I32();
  c.rel_hidden = r.I32();
  c.unk_buckets = r.I32();
  if (c.embedding_dim <= 0 || c.embedding_dim > 4096 || c.recurrent_layers < 0 ||
      c.recurrent_layers > 64 || c.arc_hidden <= 0 || c.arc_hidden > 4096 ||
      c.rel_hidden <= 0 || c.rel_hidden > 4096 || c.unk_buckets <= 0 ||
      c.unk_buckets > (1 << 20)) {
    throw ModelFormatError("model dimensions out of range");
  }
  std::vector<std::string> words = r.Strings();
  std::vector<std::string> labels = r.Strings();
  if (labels.empty()) throw ModelFormatError("empty label vocabulary");
  std::optional<ScoreModel> model;
  try {
    model.emplace(c, mode == 0 ? ParserMode::kTreeGraph : ParserMode::kGraphFix,
                  std::move(words), std::move(labels));
  } catch (const std::invalid_argument& e) {
    throw ModelFormatError(e.what());
  }
  uint32_t blocks = r.U32();
  uint32_t expected = 0;
  ForEachBlock(model->params(), [&](const std::string&, const double*, Eigen::Index) { ++expected; });
  if (blocks != expected) throw ModelFormatError("parameter block count mismatch");
  ForEachBlock(model->params(), [&](const std::string& name, double* data, Eigen::Index count) {
    std::string stored = r.Str();
    if (stored != name) throw ModelFormatError("expected block " + name + ", found " + stored);
    if (r.U64() != static_cast<uint64_t>(count)) {
      throw ModelFormatError("size mismatch in block " + name);
    }
    for (Eigen::Index k = 0; k < count; ++k) data[k] = r.F64();
  });
  return std::move(*model);
}

ScoreModel LoadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelFormatError("cannot open " + path);
  return LoadModel(in);
}

int LoadPretrainedEmbeddings(ScoreModel& model, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  const int d = model.config().embedding_dim;
  const int known = static_cast<int>(model.word_vocab().size());
  int replaced = 0;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word)) continue;
    VectorXd v(d);
    for (int k = 0; k < d; ++k) {
      if (!(fields >> v(k))) {
        throw std::runtime_error(path + ":" + std::to_string(line_number) +
                                 ": expected " + std::to_string(d) + " values");
      }
    }
    int index = model.WordIndex(word);
    if (index < known) {
      model.params().embeddings.col(index) = v;
      ++replaced;
    }
  }
  return replaced;
}

}  // namespace eud
