// Copyright 2026 The Emorec Authors.
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
//
// Corpus manifests: a UTF-8 CSV with the exact header path,emotion,speaker
// and one utterance per line. Fields may not contain commas, so paths with
// commas are rejected rather than quoted.

#ifndef EMOREC_MANIFEST_HPP_
#define EMOREC_MANIFEST_HPP_

#include <string>
#include <vector>

namespace emorec {

struct ManifestEntry {
  std::string path;
  std::string emotion;
  std::string speaker;
};

/// Throws IoError on a missing file, a wrong header, or a malformed line
/// (the line number is named). Blank lines are ignored.
std::vector<ManifestEntry> read_manifest(const std::string& path);

/// Throws IoError when any field contains a comma.
void write_manifest(const std::string& path,
                    const std::vector<ManifestEntry>& entries);

}  // namespace emorec

#endif  // EMOREC_MANIFEST_HPP_
