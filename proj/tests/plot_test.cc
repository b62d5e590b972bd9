#include "exactsdp/plot.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "exactsdp/gallery.h"
#include "test_util.h"

namespace exactsdp {
namespace {

namespace fs = std::filesystem;

std::string ReadAll(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path TempStem(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "exactsdp_plot_test";
  fs::create_directories(dir);
  return dir / name;
}

// Pixel centres against direct evaluation.
void ExpectSignAgreement(const ConstraintSet& s, const Raster& r) {
  long mismatches = 0;
  for (int iy = 0; iy < r.height; ++iy) {
    for (int ix = 0; ix < r.width; ++ix) {
      const Eigen::Vector2d c = r.Centre(ix, iy);
      bool feasible = true;
      for (const SymMat& b : s.members) {
        feasible = feasible && EvalQuadratic(Eigen::VectorXd(c), 1.0, b) >= 0.0;
      }
      mismatches += feasible != (r.feasible[iy * r.width + ix] != 0);
    }
  }
  EXPECT_EQ(mismatches, 0);
}

TEST(RasterizeRegion, UnitDisk) {
  const ConstraintSet s = testing::Set(3, {FigureOneForms(0.5)[5]});
  const Raster r = RasterizeRegion(s, Rect{-2, 2, -2, 2}, 400);
  EXPECT_EQ(r.width, 400);
  EXPECT_EQ(r.height, 400);
  EXPECT_NEAR(r.FeasibleFraction(), M_PI / 16.0, 0.01 * M_PI / 16.0);
  ExpectSignAgreement(s, r);
  // Row 0 is the top row.
  EXPECT_GT(r.Centre(0, 0)(1), r.Centre(0, r.height - 1)(1));
  EXPECT_LT(r.Centre(0, 0)(0), r.Centre(r.width - 1, 0)(0));
}

TEST(RasterizeRegion, EmptySetIsFullyGray) {
  const Raster r = RasterizeRegion(testing::Set(3, {}), Rect{-1, 1, -1, 1}, 64);
  EXPECT_EQ(r.FeasibleFraction(), 1.0);
}

TEST(RasterizeRegion, RejectsOtherOrders) {
  EXPECT_THROW(RasterizeRegion(testing::Set(2, {SymMat::Identity(2)}), Rect{-1, 1, -1, 1}, 10),
               std::invalid_argument);
}

// The annulus 1 <= |u| <= 2 minus eight disjoint disks of radius 1/2 has
// area 3 pi - 2 pi = pi.
TEST(RasterizeRegion, RingOfDisksArea) {
  const GalleryCase c = BuildCase("fig2");
  const Rect box = *c.plot_box;
  const double analytic = M_PI / ((box.x_hi - box.x_lo) * (box.y_hi - box.y_lo));
  const Raster r = RasterizeRegion(c.problem.bset, box, 800);
  EXPECT_NEAR(r.FeasibleFraction(), analytic, 0.01 * analytic);
  ExpectSignAgreement(c.problem.bset, r);
}

TEST(RasterizeRegion, SignAgreementOnGalleryPlots) {
  for (const std::string& id : GalleryIds()) {
    const GalleryCase c = BuildCase(id);
    if (!c.plot_box || c.problem.n != 3) continue;
    ExpectSignAgreement(c.problem.bset, RasterizeRegion(c.problem.bset, *c.plot_box, 200));
  }
}

TEST(EmitPlot, DeterministicFiles) {
  const GalleryCase c = BuildCase("fig2");
  const fs::path a = TempStem("a");
  const fs::path b = TempStem("b");
  EmitPlot(c.problem.bset, *c.plot_box, 120, a.string());
  EmitPlot(c.problem.bset, *c.plot_box, 120, b.string());
  const std::string ppm = ReadAll(a.string() + ".ppm");
  EXPECT_EQ(ppm, ReadAll(b.string() + ".ppm"));
  EXPECT_EQ(ReadAll(a.string() + ".svg"), ReadAll(b.string() + ".svg"));
  const std::string header = "P6\n120 120\n255\n";
  ASSERT_EQ(ppm.substr(0, header.size()), header);
  EXPECT_EQ(ppm.size(), header.size() + 3u * 120 * 120);
  const std::string svg = ReadAll(a.string() + ".svg");
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(WritePpm, GrayAndWhite) {
  const Raster r = RasterizeRegion(testing::Set(3, {FigureOneForms(0.5)[5]}), Rect{-2, 2, -2, 2}, 3);
  const fs::path p = TempStem("tiny");
  WritePpm(r, p.string() + ".ppm");
  const std::string ppm = ReadAll(p.string() + ".ppm");
  const std::string header = "P6\n3 3\n255\n";
  ASSERT_EQ(ppm.size(), header.size() + 27);
  // Only the centre pixel lies in the unit disk.
  for (int k = 0; k < 9; ++k) {
    const unsigned char v = static_cast<unsigned char>(ppm[header.size() + 3 * k]);
    EXPECT_EQ(v, k == 4 ? 160 : 255) << k;
  }
}

}  // namespace
}  // namespace exactsdp
