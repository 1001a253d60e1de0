#include "shiftdecon/error.hpp"

namespace shiftdecon {

std::string_view error_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::LeadingZeroKernel: return "LeadingZeroKernel";
    case ErrorKind::Divergent: return "Divergent";
    case ErrorKind::KernelShape: return "KernelShape";
    case ErrorKind::BadCenter: return "BadCenter";
    case ErrorKind::SingularShiftMatrix: return "SingularShiftMatrix";
    case ErrorKind::HalfWidthTooSmall: return "HalfWidthTooSmall";
    case ErrorKind::IncompleteResponse: return "IncompleteResponse";
    case ErrorKind::BlurWiderThanImage: return "BlurWiderThanImage";
    case ErrorKind::OffAxisMotion: return "OffAxisMotion";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::EmptyWindow: return "EmptyWindow";
    case ErrorKind::Format: return "Format";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace shiftdecon
