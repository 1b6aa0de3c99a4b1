// include/hspitch/postprocess.h

// Copyright 2026  HSPitch Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef HSPITCH_POSTPROCESS_H_
#define HSPITCH_POSTPROCESS_H_

#include <vector>

namespace hspitch {

struct RectifyParams {
  int s = 1;           // run length that establishes a voiced region; also
                       // the history length averaged for the fill value
  int j = 0;           // future frames smoothed after a dip
  double alpha = 0.3;  // weight kept on the original value when blending
};

// Smooths transient likelihood dips inside established voiced runs. The
// threshold is max(scores)/2 over the whole sequence. Once s consecutive
// frames have exceeded it, a frame at or below it starts a smoothing window
// of j+1 frames, each blended with the mean of the s frames preceding the
// dip. The run counter restarts from whatever consecutive smoothed frames
// re-crossed the threshold by the window's end.
std::vector<double> rectify(const std::vector<double> &scores,
                            const RectifyParams &params);

}  // namespace hspitch

#endif  // HSPITCH_POSTPROCESS_H_
