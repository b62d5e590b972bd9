#include "exactsdp/plot.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace exactsdp {
namespace {

constexpr std::uint8_t kGray = 160;

// Writes to a temporary file and renames it into place.
void WriteAtomically(const std::string& path, const std::string& bytes) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

Eigen::Vector2d Raster::Centre(int ix, int iy) const {
  const double dx = (box.x_hi - box.x_lo) / width;
  const double dy = (box.y_hi - box.y_lo) / height;
  return {box.x_lo + (ix + 0.5) * dx, box.y_hi - (iy + 0.5) * dy};
}

double Raster::FeasibleFraction() const {
  long count = 0;
  for (std::uint8_t f : feasible) count += f;
  return feasible.empty() ? 0.0 : static_cast<double>(count) / feasible.size();
}

Raster RasterizeRegion(const ConstraintSet& s, const Rect& box, int resolution) {
  for (const SymMat& b : s.members) {
    if (b.n() != 3) throw std::invalid_argument("plot: members must be 3 x 3 (n - 1 = 2)");
  }
  if (s.n != 0 && s.n != 3) throw std::invalid_argument("plot: n - 1 must be 2");
  if (resolution <= 0) throw std::invalid_argument("plot: resolution must be positive");
  if (!(box.x_lo < box.x_hi) || !(box.y_lo < box.y_hi)) {
    throw std::invalid_argument("plot: empty box");
  }
  Raster r;
  r.width = r.height = resolution;
  r.box = box;
  r.feasible.assign(static_cast<std::size_t>(resolution) * resolution, 0);
  for (int iy = 0; iy < resolution; ++iy) {
    for (int ix = 0; ix < resolution; ++ix) {
      const Eigen::Vector2d c = r.Centre(ix, iy);
      r.feasible[static_cast<std::size_t>(iy) * resolution + ix] =
          InRegion(s, Eigen::VectorXd(c)) ? 1 : 0;
    }
  }
  return r;
}

void WritePpm(const Raster& r, const std::string& path) {
  std::string bytes = "P6\n" + std::to_string(r.width) + " " +
                      std::to_string(r.height) + "\n255\n";
  bytes.reserve(bytes.size() + r.feasible.size() * 3);
  for (std::uint8_t f : r.feasible) {
    const char v = static_cast<char>(f ? kGray : 255);
    bytes.append(3, v);
  }
  WriteAtomically(path, bytes);
}

void WriteSvg(const ConstraintSet& s, const Raster& r, const std::string& path) {
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << r.width << "\" height=\"" << r.height << "\" viewBox=\"0 0 " << r.width
      << " " << r.height << "\" shape-rendering=\"crispEdges\">\n"
      << "<rect width=\"" << r.width << "\" height=\"" << r.height
      << "\" fill=\"#ffffff\"/>\n<g fill=\"#a0a0a0\">\n";
  for (int iy = 0; iy < r.height; ++iy) {
    int ix = 0;
    while (ix < r.width) {
      if (!r.feasible[static_cast<std::size_t>(iy) * r.width + ix]) {
        ++ix;
        continue;
      }
      const int start = ix;
      while (ix < r.width && r.feasible[static_cast<std::size_t>(iy) * r.width + ix]) ++ix;
      svg << "<rect x=\"" << start << "\" y=\"" << iy << "\" width=\""
          << ix - start << "\" height=\"1\"/>\n";
    }
  }
  svg << "</g>\n<g stroke=\"#000000\" stroke-width=\"1\" fill=\"none\">\n";

  // Zero level sets by marching squares over the pixel-centre lattice.
  const int w = r.width;
  const int h = r.height;
  std::vector<double> q(static_cast<std::size_t>(w) * h);
  for (const SymMat& b : s.members) {
    for (int iy = 0; iy < h; ++iy) {
      for (int ix = 0; ix < w; ++ix) {
        const Eigen::Vector2d c = r.Centre(ix, iy);
        q[static_cast<std::size_t>(iy) * w + ix] = EvalQuadratic(c, 1.0, b);
      }
    }
    svg << "<path d=\"";
    for (int iy = 0; iy + 1 < h; ++iy) {
      for (int ix = 0; ix + 1 < w; ++ix) {
        // Corners in order: top-left, top-right, bottom-right, bottom-left.
        const double v[4] = {q[iy * w + ix], q[iy * w + ix + 1],
                             q[(iy + 1) * w + ix + 1], q[(iy + 1) * w + ix]};
        const double px[4] = {ix + 0.5, ix + 1.5, ix + 1.5, ix + 0.5};
        const double py[4] = {iy + 0.5, iy + 0.5, iy + 1.5, iy + 1.5};
        double ex[4];
        double ey[4];
        int m = 0;
        for (int e = 0; e < 4; ++e) {
          const int f = (e + 1) % 4;
          if ((v[e] >= 0.0) == (v[f] >= 0.0)) continue;
          const double t = v[e] / (v[e] - v[f]);
          ex[m] = px[e] + t * (px[f] - px[e]);
          ey[m] = py[e] + t * (py[f] - py[e]);
          ++m;
        }
        for (int k = 0; k + 1 < m; k += 2) {
          svg << "M" << Num(ex[k]) << " " << Num(ey[k]) << "L" << Num(ex[k + 1])
              << " " << Num(ey[k + 1]);
        }
      }
    }
    svg << "\"/>\n";
  }
  svg << "</g>\n</svg>\n";
  WriteAtomically(path, svg.str());
}

Raster EmitPlot(const ConstraintSet& s, const Rect& box, int resolution,
                const std::string& stem) {
  Raster r = RasterizeRegion(s, box, resolution);
  WritePpm(r, stem + ".ppm");
  WriteSvg(s, r, stem + ".svg");
  return r;
}

}  // namespace exactsdp
