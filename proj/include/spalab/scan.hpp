#pragma once

#include "spalab/counterexamples.hpp"
#include "spalab/witness_family.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace spalab {

enum class Region {
  NotBlockPositive,
  PositiveType,
  CopositiveType,
  PPTType,
  PPTMatrix,
};

inline constexpr std::string_view to_token(Region r) {
  switch (r) {
    case Region::NotBlockPositive: return "NotBlockPositive";
    case Region::PositiveType: return "PositiveType";
    case Region::CopositiveType: return "CopositiveType";
    case Region::PPTType: return "PPTType";
    case Region::PPTMatrix: return "PPTMatrix";
  }
  return "Unknown";
}

template <typename Scalar>
struct ScanRow {
  Scalar b, c, a;
  Region region;
  std::optional<CaseTag> curve;
};

/// Classify the slice a = p - b - c of the family over a (resolution+1)^2
/// grid of (b, c) in [0, p]^2, dropping points with a < 0. Grid cells hit by
/// a catalog curve are tagged: the branch bc = (1-a)^2 when the first-case
/// window contains p, the edge branches c = 0 / b = 0 with a >= 1 when the
/// second-case window does. Region labels use a 1e-12 slack so cells lying
/// exactly on a boundary do not flip with rounding.
template <typename Scalar>
std::vector<ScanRow<Scalar>> scan_plane(Scalar p, int resolution) {
  if (resolution < 2) throw std::invalid_argument("scan_plane: resolution must be at least 2");
  const Scalar theta = theta_for_p(p);
  const Scalar slack = Scalar(1e-12);
  const int R = resolution;

  std::map<std::pair<int, int>, CaseTag> curve_cells;
  const auto snap = [&](Scalar b, Scalar c, CaseTag tag) {
    const int i = int(std::lround(double(b * Scalar(R) / p)));
    const int j = int(std::lround(double(c * Scalar(R) / p)));
    if (i < 0 || j < 0 || i > R || j > R) return;
    curve_cells.emplace(std::make_pair(i, j), tag);
    curve_cells.emplace(std::make_pair(j, i), tag);
  };
  if (solve_case_i(p)) {
    const Scalar a_lo = std::max(Scalar(0), Scalar(2) - p);
    const Scalar a_hi = std::min(Scalar(1), p);
    const int samples = 4 * R;
    for (int k = 0; k <= samples; ++k) {
      const Scalar a = a_lo + (a_hi - a_lo) * Scalar(k) / Scalar(samples);
      const Scalar D = (p - a) * (p - a) - Scalar(4) * (Scalar(1) - a) * (Scalar(1) - a);
      if (D < Scalar(0)) continue;
      const Scalar sd = std::sqrt(D);
      snap(((p - a) + sd) / Scalar(2), ((p - a) - sd) / Scalar(2), CaseTag::CaseI);
    }
  }
  if (solve_case_ii(p)) {
    const int samples = 4 * R;
    for (int k = 0; k <= samples; ++k) {
      const Scalar a = Scalar(1) + (p - Scalar(1)) * Scalar(k) / Scalar(samples);
      snap(p - a, Scalar(0), CaseTag::CaseII);
    }
  }

  std::vector<ScanRow<Scalar>> rows;
  rows.reserve(std::size_t(R + 1) * std::size_t(R + 1));
  for (int i = 0; i <= R; ++i) {
    for (int j = 0; j <= R; ++j) {
      const Scalar b = p * Scalar(i) / Scalar(R);
      const Scalar c = p * Scalar(j) / Scalar(R);
      Scalar a = p - b - c;
      if (a < Scalar(0)) {
        if (a < -slack) continue;
        a = Scalar(0);
      }
      const WitnessParams<Scalar> w(a, b, c, theta);
      Region region;
      if (!is_block_positive_closed_form(w, slack)) {
        region = Region::NotBlockPositive;
      } else if (is_ppt_closed_form(w, slack)) {
        region = Region::PPTMatrix;
      } else {
        switch (witness_type_from_criterion(w)) {
          case WitnessType::PositiveType: region = Region::PositiveType; break;
          case WitnessType::CopositiveType: region = Region::CopositiveType; break;
          default: region = Region::PPTType; break;
        }
      }
      std::optional<CaseTag> tag;
      if (auto it = curve_cells.find({i, j}); it != curve_cells.end()) tag = it->second;
      rows.push_back(ScanRow<Scalar>{b, c, a, region, tag});
    }
  }
  return rows;
}

template <typename Scalar>
void write_scan_csv(std::ostream& os, const std::vector<ScanRow<Scalar>>& rows) {
  os << "b,c,a,region,case\n";
  char buf[96];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g", double(row.b), double(row.c),
                  double(row.a));
    os << buf << ',' << to_token(row.region) << ',';
    if (row.curve) os << (*row.curve == CaseTag::CaseI ? "CaseI" : "CaseII");
    os << '\n';
  }
}

}  // namespace spalab
