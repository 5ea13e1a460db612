#include "optomask/layout.hpp"

#include <fstream>
#include <stdexcept>

namespace optomask {

void LayoutParams::validate() const {
  if (pixel_size_nm <= 0 || pixel_gap_nm < 0 || mask_gap_nm < 0)
    throw std::invalid_argument("layout: lengths must be positive");
}

std::uint64_t MaskGeometry::open_count() const {
  std::uint64_t n = 0;
  for (std::uint8_t v : open) n += v;
  return n;
}

namespace {

MaskGeometry geometry_shell(const IncidenceMatrix& m, const LayoutParams& p) {
  p.validate();
  const PixelGrid grid = PixelGrid::for_rows(m.rows);
  MaskGeometry g;
  g.side = grid.side;
  g.used_cells = m.rows;
  g.open.assign(std::size_t(grid.side) * grid.side, 0);
  g.extent_nm = grid.side * p.pitch_nm();
  return g;
}

}  // namespace

MaskGeometry mask_geometry(const IncidenceMatrix& m, int col, const LayoutParams& p) {
  if (col < 0 || col >= m.cols) throw std::invalid_argument("mask_geometry: column out of range");
  MaskGeometry g = geometry_shell(m, p);
  for (std::uint64_t r = 0; r < m.rows; ++r) g.open[r] = !m.bits.get(r, col);
  return g;
}

MaskGeometry stack_preview(const IncidenceMatrix& m, std::span<const int> combo,
                           const LayoutParams& p) {
  for (int c : combo)
    if (c < 0 || c >= m.cols) throw std::invalid_argument("stack_preview: column out of range");
  MaskGeometry g = geometry_shell(m, p);
  for (std::uint64_t r = 0; r < m.rows; ++r) {
    bool open = true;
    for (int c : combo)
      if (m.bits.get(r, c)) { open = false; break; }
    g.open[r] = open;
  }
  return g;
}

std::uint64_t binomial_capped(int nn, int k, std::uint64_t cap) {
  if (k < 0 || k > nn) return 0;
  if (k > nn - k) k = nn - k;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    const unsigned __int128 next = (unsigned __int128)r * (nn - k + i) / i;
    if (next > cap)
      throw std::runtime_error("layout: combination count exceeds the configured limit");
    r = static_cast<std::uint64_t>(next);
  }
  return r;
}

bool next_k_subset(std::vector<int>& c, int nn) {
  const int k = static_cast<int>(c.size());
  for (int i = k - 1; i >= 0; --i) {
    if (c[i] < nn - k + i) {
      ++c[i];
      for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

InstanceArray instance_array(int n, int k, const LayoutParams& p, std::uint64_t combo_limit) {
  p.validate();
  if (n < 3) throw std::invalid_argument("instance_array: n must be at least 3");
  const int cols = edge_count(MatrixKind::hamiltonian, n);
  if (k < 0 || k > cols)
    throw std::invalid_argument("instance_array: layer count out of range");

  InstanceArray arr;
  arr.n = n;
  arr.k = k;
  arr.count = binomial_capped(cols, k, combo_limit);

  int side = 1;
  while (std::uint64_t(side) * side < arr.count) ++side;
  arr.grid_side = side;
  arr.last_row_used = arr.count % side == 0 ? side : arr.count % side;
  arr.unused_cells = std::uint64_t(side) * side - arr.count;

  const PixelGrid grid = PixelGrid::for_rows([&] {
    std::uint64_t rows = 1;
    for (int i = 2; i < n; ++i) rows *= i;
    return rows;
  }());
  arr.mask_extent_nm = grid.side * p.pitch_nm();
  arr.box_nm = std::int64_t(side) * (arr.mask_extent_nm + p.mask_gap_nm);

  arr.combos.reserve(arr.count * std::size_t(k));
  if (k == 0) return arr;
  std::vector<int> c(k);
  for (int i = 0; i < k; ++i) c[i] = i;
  do
    arr.combos.insert(arr.combos.end(), c.begin(), c.end());
  while (next_k_subset(c, cols));
  return arr;
}

std::vector<Rect> mask_apertures(const MaskGeometry& g, const LayoutParams& p, std::int64_t ox,
                                 std::int64_t oy) {
  std::vector<Rect> rects;
  const std::int64_t pitch = p.pitch_nm();
  for (int i = 0; i < g.side; ++i)
    for (int j = 0; j < g.side; ++j)
      if (g.open[std::size_t(i) * g.side + j])
        rects.push_back({ox + j * pitch, oy + i * pitch, p.pixel_size_nm, p.pixel_size_nm});
  return rects;
}

ArrayGeometry array_geometry(const IncidenceMatrix& m, const InstanceArray& arr,
                             const LayoutParams& p) {
  if (m.n != arr.n) throw std::invalid_argument("array_geometry: size mismatch");
  ArrayGeometry out;
  out.canvas_nm = arr.box_nm;
  const std::int64_t pitch = arr.mask_extent_nm + p.mask_gap_nm;
  for (std::uint64_t idx = 0; idx < arr.count; ++idx) {
    const std::int64_t gi = idx / arr.grid_side;
    const std::int64_t gj = idx % arr.grid_side;
    std::span<const int> combo(arr.combos.data() + idx * arr.k, std::size_t(arr.k));
    const MaskGeometry g = stack_preview(m, combo, p);
    const std::vector<Rect> rects = mask_apertures(g, p, gj * pitch, gi * pitch);
    out.apertures.insert(out.apertures.end(), rects.begin(), rects.end());
  }
  return out;
}

void emit_svg(const std::vector<Rect>& apertures, std::int64_t canvas_w, std::int64_t canvas_h,
              const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("emit_svg: cannot open " + path);
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << canvas_w << "\" height=\""
    << canvas_h << "\" viewBox=\"0 0 " << canvas_w << " " << canvas_h << "\">\n";
  f << "<rect x=\"0\" y=\"0\" width=\"" << canvas_w << "\" height=\"" << canvas_h
    << "\" fill=\"#000000\"/>\n";
  for (const Rect& r : apertures)
    f << "<rect x=\"" << r.x << "\" y=\"" << r.y << "\" width=\"" << r.w << "\" height=\"" << r.h
      << "\" fill=\"#ffffff\"/>\n";
  f << "</svg>\n";
  if (!f) throw std::runtime_error("emit_svg: write failed for " + path);
}

void emit_rects(const std::vector<Rect>& apertures, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("emit_rects: cannot open " + path);
  f << "RECTS v1\n";
  for (const Rect& r : apertures) f << r.x << ' ' << r.y << ' ' << r.w << ' ' << r.h << '\n';
  if (!f) throw std::runtime_error("emit_rects: write failed for " + path);
}

}  // namespace optomask
