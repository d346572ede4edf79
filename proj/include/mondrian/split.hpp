#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "mondrian/error.hpp"
#include "mondrian/geometry.hpp"
#include "mondrian/grid.hpp"

namespace mondrian {

inline void check_within(const TypedGrid& grid, const Rect& r) {
  if (!r.valid() || r.x0 < 0 || r.y0 < 0 || r.x1 >= grid.cols() || r.y1 >= grid.rows()) {
    throw Error(ErrorCode::InvalidRegion,
                "region (" + std::to_string(r.x0) + "," + std::to_string(r.y0) + "," +
                    std::to_string(r.x1) + "," + std::to_string(r.y1) + ") is outside the " +
                    std::to_string(grid.cols()) + "x" + std::to_string(grid.rows()) + " grid");
  }
}

/// The cells inside a box as CSV, keeping empty cells so relative positions
/// are preserved.
inline std::string region_csv(const TypedGrid& grid, const Rect& r, CsvDialect dialect = {}) {
  check_within(grid, r);
  std::string out;
  for (int y = r.y0; y <= r.y1; ++y) {
    for (int x = r.x0; x <= r.x1; ++x) {
      if (x > r.x0) out.push_back(dialect.delimiter);
      out += csv_escape(grid.value_at(x, y), dialect);
    }
    out.push_back('\n');
  }
  return out;
}

struct SplitResult {
  std::vector<std::filesystem::path> outputs;
};

/// Writes one CSV per region as <stem>_r<k>.csv. All regions are validated
/// before anything is written, and an output never replaces the source file.
inline SplitResult split_file(const TypedGrid& grid, std::span<const Rect> regions,
                              const std::filesystem::path& outdir, const std::string& stem,
                              CsvDialect dialect = {},
                              const std::filesystem::path& source = {}) {
  for (const auto& r : regions) check_within(grid, r);
  std::filesystem::create_directories(outdir);
  SplitResult result;
  for (std::size_t k = 0; k < regions.size(); ++k) {
    auto path = outdir / (stem + "_r" + std::to_string(k) + ".csv");
    if (!source.empty() && std::filesystem::exists(source) && std::filesystem::exists(path) &&
        std::filesystem::equivalent(path, source)) {
      throw Error(ErrorCode::Io, "refusing to overwrite input " + source.string());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    out << region_csv(grid, regions[k], dialect);
    result.outputs.push_back(path);
  }
  return result;
}

}  // namespace mondrian
