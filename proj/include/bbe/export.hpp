#pragma once

#include <string>

#include "bbe/characterize.hpp"
#include "bbe/io.hpp"

namespace bbe {

// One row per cell, a-major, after "#"-prefixed manifest lines and a header:
// s1,s2,status,undominated1,undominated2,minmax1,minmax2,sufficient1,
// sufficient2,investment1,investment2.
std::string rasterCsv(const RegionRaster& r, const RunManifest& m);

// Heatmap of the verdicts with axis ticks, a legend and the raster's
// markers. The manifest goes into a <metadata> element; no timestamp is
// written.
std::string rasterSvg(const RegionRaster& r, const RunManifest& m, const std::string& title);

// Verdict counts and marker positions, for --format json.
Json rasterSummary(const RegionRaster& r);

}  // namespace bbe
