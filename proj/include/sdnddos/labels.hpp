/*
 * Copyright 2026 The sdnddos Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// The eight traffic classes: normal plus every non-empty combination of the
// TCP, UDP and ICMP flood vectors.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sdnddos {

enum class TrafficClass : std::uint8_t { N = 0, T, U, I, TU, TI, UI, A };

inline constexpr std::size_t kNumClasses = 8;
inline constexpr std::array<std::string_view, kNumClasses> kClassNames = {
    "N", "T", "U", "I", "TU", "TI", "UI", "A"};

// Attack vectors as a bit set.
enum AttackVector : std::uint8_t { kVectorTcp = 1, kVectorUdp = 2, kVectorIcmp = 4 };

inline std::string_view class_name(TrafficClass c) {
  return kClassNames[static_cast<std::size_t>(c)];
}

inline std::optional<TrafficClass> parse_class(std::string_view name) {
  for (std::size_t i = 0; i < kNumClasses; ++i) {
    if (kClassNames[i] == name) return static_cast<TrafficClass>(i);
  }
  return std::nullopt;
}

inline TrafficClass class_of_vectors(std::uint8_t vectors) {
  switch (vectors & 7u) {
    case 0: return TrafficClass::N;
    case kVectorTcp: return TrafficClass::T;
    case kVectorUdp: return TrafficClass::U;
    case kVectorIcmp: return TrafficClass::I;
    case kVectorTcp | kVectorUdp: return TrafficClass::TU;
    case kVectorTcp | kVectorIcmp: return TrafficClass::TI;
    case kVectorUdp | kVectorIcmp: return TrafficClass::UI;
    default: return TrafficClass::A;
  }
}

inline std::uint8_t vectors_of_class(TrafficClass c) {
  switch (c) {
    case TrafficClass::N: return 0;
    case TrafficClass::T: return kVectorTcp;
    case TrafficClass::U: return kVectorUdp;
    case TrafficClass::I: return kVectorIcmp;
    case TrafficClass::TU: return kVectorTcp | kVectorUdp;
    case TrafficClass::TI: return kVectorTcp | kVectorIcmp;
    case TrafficClass::UI: return kVectorUdp | kVectorIcmp;
    case TrafficClass::A: return kVectorTcp | kVectorUdp | kVectorIcmp;
  }
  return 0;
}

inline std::vector<std::string> eight_class_names() {
  return {kClassNames.begin(), kClassNames.end()};
}

inline std::vector<std::string> two_class_names() { return {"N", "Attack"}; }

// Two-class view: every attack label becomes 1.
inline int collapse_to_binary(int class_id) { return class_id == 0 ? 0 : 1; }

}  // namespace sdnddos
