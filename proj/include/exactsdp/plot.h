#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "exactsdp/model.h"
#include "exactsdp/oracle.h"

namespace exactsdp {

/// Feasibility raster of f_+(1, B) over a box. Row 0 is the top row
/// (largest u2); pixel (ix, iy) samples its cell centre.
struct Raster {
  int width = 0;
  int height = 0;
  Rect box;
  std::vector<std::uint8_t> feasible;  // row-major, 1 = all q(u, 1, B) >= 0

  /// Cell centre of pixel (ix, iy) as (u1, u2).
  Eigen::Vector2d Centre(int ix, int iy) const;
  double FeasibleFraction() const;
};

/// Throws std::invalid_argument unless every member is 3 x 3.
Raster RasterizeRegion(const ConstraintSet& s, const Rect& box, int resolution);

/// Binary P6 image: gray (160) where feasible, white elsewhere.
void WritePpm(const Raster& r, const std::string& path);

/// SVG 1.1 with the raster as gray row spans and the zero level set of each
/// member stroked (marching squares on the same grid).
void WriteSvg(const ConstraintSet& s, const Raster& r, const std::string& path);

/// Writes <stem>.ppm and <stem>.svg; returns the raster.
Raster EmitPlot(const ConstraintSet& s, const Rect& box, int resolution,
                const std::string& stem);

}  // namespace exactsdp
