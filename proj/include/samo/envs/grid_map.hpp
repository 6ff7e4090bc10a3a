#pragma once

#include <cstdint>
#include <vector>

namespace samo::envs {

enum class WallColor : std::uint8_t { kNone = 0, kGreen = 1, kRed = 2 };

struct CellIndex {
  int x = 0;
  int y = 0;
  friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

struct RayHit {
  double distance = 0.0;  // capped at the query range
  bool hit = false;
  WallColor color = WallColor::kNone;
};

// Square-cell occupancy grid. Cell (i, j) covers [i c, (i+1) c) x [j c, (j+1) c).
// Cells never marked free are walls, including everything outside the bounds.
class GridMap {
 public:
  GridMap(double cell_size, CellIndex min_cell, CellIndex max_cell);

  double cell_size() const { return cell_; }
  CellIndex cell_of(double x, double y) const;
  bool is_free(CellIndex c) const;
  void set_free(CellIndex c);
  WallColor color(CellIndex c) const;
  void set_color(CellIndex c, WallColor color);

  // Distance along (dx, dy) (unit) from (x, y) to the first wall cell.
  RayHit cast(double x, double y, double dx, double dy, double range) const;
  // True when the straight move from (x0, y0) to (x1, y1) enters a wall cell.
  bool blocked(double x0, double y0, double x1, double y1) const;

 private:
  bool in_bounds(CellIndex c) const;
  std::size_t offset(CellIndex c) const;

  double cell_;
  CellIndex min_;
  int width_;
  int height_;
  std::vector<std::uint8_t> free_;
  std::vector<WallColor> colors_;
};

}  // namespace samo::envs
