#pragma once

#include <stdexcept>
#include <string>

namespace hgr {

enum class Errc {
  InvalidLayout,
  WrongJointCount,
  NonFiniteCoordinate,
  DegeneratePalm,
  ZeroAmplitude,
  MissingRoot,
  EmptyDataset,
  ParseError,
  MissingSubject,
  DegenerateInput,
  NotARotation,
  InvalidConfig,
  ZeroLengthBone,
  ShapeMismatch,
  InvalidMask,
  LabelOutOfRange,
  EmptyFilter,
  OutOfRange,
  IoError,
  FormatError,
};

const char* to_string(Errc code) noexcept;

/// Library-wide exception. `where` and `detail` carry the numeric context
/// of the failure (frame/joint, line/value count, finger/segment, ...);
/// -1 when not applicable.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, int where = -1, int detail = -1);

  Errc code() const noexcept { return code_; }
  int where() const noexcept { return where_; }
  int detail() const noexcept { return detail_; }
  /// The message without the code prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  Errc code_;
  int where_;
  int detail_;
  std::string message_;
};

}  // namespace hgr
