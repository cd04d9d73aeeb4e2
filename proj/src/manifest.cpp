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

#include "emorec/manifest.hpp"

#include <fstream>
#include <string>

#include "emorec/common.hpp"

namespace emorec {
namespace {

constexpr const char kHeader[] = "path,emotion,speaker";

void strip_cr(std::string* line) {
  if (!line->empty() && line->back() == '\r') line->pop_back();
}

}  // namespace

std::vector<ManifestEntry> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ": empty manifest file");
  strip_cr(&line);
  if (line != kHeader) {
    throw IoError(path + ": manifest header must be '" + kHeader + "'");
  }

  std::vector<ManifestEntry> entries;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(&line);
    if (line.empty()) continue;
    const size_t first = line.find(',');
    const size_t second = first == std::string::npos
                              ? std::string::npos
                              : line.find(',', first + 1);
    if (second == std::string::npos ||
        line.find(',', second + 1) != std::string::npos) {
      throw IoError(path + " line " + std::to_string(line_no) +
                    ": expected exactly path,emotion,speaker");
    }
    ManifestEntry entry;
    entry.path = line.substr(0, first);
    entry.emotion = line.substr(first + 1, second - first - 1);
    entry.speaker = line.substr(second + 1);
    if (entry.path.empty() || entry.emotion.empty() || entry.speaker.empty()) {
      throw IoError(path + " line " + std::to_string(line_no) +
                    ": empty manifest field");
    }
    entries.push_back(std::move(entry));
  }
  if (in.bad()) throw IoError("read failure on " + path);
  return entries;
}

void write_manifest(const std::string& path,
                    const std::vector<ManifestEntry>& entries) {
  std::string text(kHeader);
  text += "\n";
  for (const ManifestEntry& entry : entries) {
    for (const std::string* field : {&entry.path, &entry.emotion,
                                     &entry.speaker}) {
      if (field->find(',') != std::string::npos) {
        throw IoError("manifest fields may not contain commas: " + *field);
      }
    }
    text += entry.path + "," + entry.emotion + "," + entry.speaker + "\n";
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("short write to " + path);
}

}  // namespace emorec
