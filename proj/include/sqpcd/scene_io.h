// Copyright 2026 The sqpcd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SQPCD_SCENE_IO_H_
#define SQPCD_SCENE_IO_H_

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqpcd/planning.h"

namespace sqpcd {

inline constexpr int kSceneFormatVersion = 1;

// Malformed scene or path input. The message names the line and field.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parses a version-1 scene document. Unknown fields are rejected.
Scene ParseScene(const std::string& text, const std::string& source = "<scene>");
Scene LoadScene(const std::string& path);

// Rotation samples R_mean * Exp(sigma * z), z ~ N(0, I), drawn with `seed`.
std::vector<Mat3> GenerateRotationSamples(const Mat3& mean, double sigma_rad,
                                          int count, std::uint64_t seed);

// Path files: CSV with header "path_id,waypoint_index,q0,...,q{n-1}".
void WritePaths(std::ostream& out, const std::map<int, Path>& paths);
std::map<int, Path> ReadPaths(std::istream& in, const std::string& source = "<paths>");

}  // namespace sqpcd

#endif  // SQPCD_SCENE_IO_H_
