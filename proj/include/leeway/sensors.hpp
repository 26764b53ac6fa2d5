#pragma once

namespace leeway {

/// Which environmental force a measurement or map describes.
enum class SourceKind { wind, current };

inline const char* source_name(SourceKind s) {
  return s == SourceKind::wind ? "wind" : "current";
}

/// One hull-relative sensor reading, as emitted by the anemometer
/// (wind) or the paddle wheel (speed through water).
/// bearing_rel is radians relative to the bow, 0 = dead ahead, CCW positive.
struct RelativeReading {
  double speed = 0.0;        // m/s, >= 0
  double bearing_rel = 0.0;  // rad
  SourceKind source = SourceKind::wind;
  double time = 0.0;         // s
};

}  // namespace leeway
