// layout.hpp - physical mask geometry and fabrication-array planning
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "optomask/incidence.hpp"
#include "optomask/optics.hpp"

namespace optomask {

// All lengths in nanometres.
struct LayoutParams {
  std::int64_t pixel_size_nm = 1500;
  std::int64_t pixel_gap_nm = 1500;
  std::int64_t mask_gap_nm = 15000;

  void validate() const;
  std::int64_t pitch_nm() const { return pixel_size_nm + pixel_gap_nm; }
};

// Aperture plan of one mask (or one pre-composited stack): cell (i, j) of a
// side x side grid is open where every contributing column has a 0 bit.
// extent_nm is the gap-inclusive footprint side*(pixel+gap) per axis.
struct MaskGeometry {
  int side = 0;
  std::uint64_t used_cells = 0;
  std::vector<std::uint8_t> open;  // row-major, side*side
  std::int64_t extent_nm = 0;

  std::uint64_t open_count() const;
};

MaskGeometry mask_geometry(const IncidenceMatrix& m, int col, const LayoutParams& p);

// Intersection of the masks in combo; an empty combo leaves every used cell open.
MaskGeometry stack_preview(const IncidenceMatrix& m, std::span<const int> combo,
                           const LayoutParams& p);

// Fabrication plan for all k-subsets of the column space, lexicographic,
// laid out row-major on the smallest square grid that fits.
struct InstanceArray {
  int n = 0;
  int k = 0;
  std::uint64_t count = 0;
  int grid_side = 0;
  std::uint64_t last_row_used = 0;
  std::uint64_t unused_cells = 0;
  std::int64_t mask_extent_nm = 0;
  std::int64_t box_nm = 0;           // bounding box per side, trailing gap included
  std::vector<int> combos;           // flat, k entries per instance
};

InstanceArray instance_array(int n, int k, const LayoutParams& p,
                             std::uint64_t combo_limit = 1000000);

// C(nn, k) guarded against exceeding cap; throws past it.
std::uint64_t binomial_capped(int nn, int k, std::uint64_t cap);

// Lexicographic successor of a k-subset of {0..nn-1}; false at the last one.
bool next_k_subset(std::vector<int>& c, int nn);

struct Rect {
  std::int64_t x = 0, y = 0, w = 0, h = 0;
  bool operator==(const Rect&) const = default;
};

// Open apertures of one mask, row-major, offset by (ox, oy).
std::vector<Rect> mask_apertures(const MaskGeometry& g, const LayoutParams& p, std::int64_t ox,
                                 std::int64_t oy);

// Apertures of every pre-composited stack of the array, instance-major.
struct ArrayGeometry {
  std::int64_t canvas_nm = 0;
  std::vector<Rect> apertures;
};

ArrayGeometry array_geometry(const IncidenceMatrix& m, const InstanceArray& arr,
                             const LayoutParams& p);

// One SVG user unit = 1 nm; apertures drawn over an opaque background rect.
void emit_svg(const std::vector<Rect>& apertures, std::int64_t canvas_w, std::int64_t canvas_h,
              const std::string& path);

// "RECTS v1" text form: one "x y w h" line per aperture, nm units.
void emit_rects(const std::vector<Rect>& apertures, const std::string& path);

}  // namespace optomask
