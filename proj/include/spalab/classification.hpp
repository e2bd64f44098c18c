#pragma once

#include <string_view>

namespace spalab {

/// Outcome of classifying a block-positive matrix by the reach of its two
/// identity-anchored segments: the ordinary one and the one transposed on
/// the second factor.
enum class WitnessType {
  PositiveType,    // plain segment reaches strictly further
  CopositiveType,  // transposed segment reaches strictly further
  PPTType,         // both segments give out together
  NotAWitness,     // not block-positive at all
};

inline constexpr std::string_view to_token(WitnessType t) {
  switch (t) {
    case WitnessType::PositiveType: return "positive";
    case WitnessType::CopositiveType: return "copositive";
    case WitnessType::PPTType: return "ppt";
    case WitnessType::NotAWitness: return "not-a-witness";
  }
  return "unknown";
}

}  // namespace spalab
