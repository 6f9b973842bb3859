// Binary model container and the optional pretrained-embedding loader.
//
// Layout (little-endian): magic "EUDPARSE", u32 version, u32 mode, five i32
// config fields, word vocabulary, label vocabulary (u32 count then u32-length
// prefixed strings), u32 block count, then per block a name string, u64 value
// count and that many 64-bit floats.

#ifndef EUD_MODEL_IO_H_
#define EUD_MODEL_IO_H_

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "eud/scorer.h"

namespace eud {

inline constexpr uint32_t kModelFormatVersion = 1;

class ModelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void SaveModel(const ScoreModel& model, std::ostream& out);
void SaveModel(const ScoreModel& model, const std::string& path);
ScoreModel LoadModel(std::istream& in);
ScoreModel LoadModel(const std::string& path);

// Reads "word v1 ... vd" lines and overwrites the embedding of every
// vocabulary word found. Returns the number of rows replaced.
int LoadPretrainedEmbeddings(ScoreModel& model, const std::string& path);

}  // namespace eud

#endif  // EUD_MODEL_IO_H_
