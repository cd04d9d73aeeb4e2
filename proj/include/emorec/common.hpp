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

#ifndef EMOREC_COMMON_HPP_
#define EMOREC_COMMON_HPP_

#include <stdexcept>
#include <string>

namespace emorec {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct EmptySignal : Error { using Error::Error; };
struct InvalidLength : Error { using Error::Error; };
struct InvalidWidth : Error { using Error::Error; };
struct SignalTooShort : Error { using Error::Error; };
struct InvalidSegment : Error { using Error::Error; };
struct RegionTooShort : Error { using Error::Error; };
struct Unnormalizable : Error { using Error::Error; };
struct FrameGridMismatch : Error { using Error::Error; };
struct MissingClass : Error { using Error::Error; };
struct InvalidLabel : Error { using Error::Error; };
struct UndecodableFrame : Error { using Error::Error; };
struct EmptyUtterance : Error { using Error::Error; };
struct InsufficientSpeakers : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace emorec

#endif  // EMOREC_COMMON_HPP_
