#include "hgr/error.hpp"

namespace hgr {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidLayout: return "InvalidLayout";
    case Errc::WrongJointCount: return "WrongJointCount";
    case Errc::NonFiniteCoordinate: return "NonFiniteCoordinate";
    case Errc::DegeneratePalm: return "DegeneratePalm";
    case Errc::ZeroAmplitude: return "ZeroAmplitude";
    case Errc::MissingRoot: return "MissingRoot";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::ParseError: return "ParseError";
    case Errc::MissingSubject: return "MissingSubject";
    case Errc::DegenerateInput: return "DegenerateInput";
    case Errc::NotARotation: return "NotARotation";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::ZeroLengthBone: return "ZeroLengthBone";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::InvalidMask: return "InvalidMask";
    case Errc::LabelOutOfRange: return "LabelOutOfRange";
    case Errc::EmptyFilter: return "EmptyFilter";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::IoError: return "IoError";
    case Errc::FormatError: return "FormatError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message, int where, int detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      where_(where),
      detail_(detail),
      message_(message) {}

}  // namespace hgr
