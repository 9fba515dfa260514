#pragma once

#include <string>

#include "helm/profile.hpp"

namespace helm {

// JSON document shape:
//   {
//     "x0": 0.0,
//     "zeta_left": 1.0,
//     "segments": [
//       {"lo": 0.0, "hi": 1.0, "alpha": {"kind": "constant", "value": 1.0}}
//     ],
//     "jumps": [{"y": 0.5, "gamma": 4.0}]
//   }
// alpha kinds and their parameters:
//   zero          {}
//   constant      {value}
//   linear        {value0, slope}        alpha = value0 + slope*(x - lo)
//   gaussian-bump {amplitude, center, width}
//   grid          {samples: [...]}       uniform over [lo, hi]
// "jumps" may be omitted when there is a single segment.  Unknown keys are
// rejected at every level.  The returned profile is validated.
ImpedanceProfile profile_from_json(const std::string& text);
ImpedanceProfile load_profile(const std::string& path);

std::string profile_to_json(const ImpedanceProfile& profile);
void save_profile(const ImpedanceProfile& profile, const std::string& path);

}  // namespace helm
