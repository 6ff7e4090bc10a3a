#include "samo/envs/grid_map.hpp"

#include <cmath>
#include <limits>

#include "samo/errors.hpp"

namespace samo::envs {

GridMap::GridMap(double cell_size, CellIndex min_cell, CellIndex max_cell)
    : cell_(cell_size),
      min_(min_cell),
      width_(max_cell.x - min_cell.x + 1),
      height_(max_cell.y - min_cell.y + 1) {
  if (!(cell_size > 0.0) || width_ <= 0 || height_ <= 0) throw ConfigError("GridMap: bad extent");
  free_.assign(static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_), 0);
  colors_.assign(free_.size(), WallColor::kNone);
}

CellIndex GridMap::cell_of(double x, double y) const {
  return {static_cast<int>(std::floor(x / cell_)), static_cast<int>(std::floor(y / cell_))};
}

bool GridMap::in_bounds(CellIndex c) const {
  return c.x >= min_.x && c.y >= min_.y && c.x < min_.x + width_ && c.y < min_.y + height_;
}

std::size_t GridMap::offset(CellIndex c) const {
  return static_cast<std::size_t>(c.y - min_.y) * static_cast<std::size_t>(width_) +
         static_cast<std::size_t>(c.x - min_.x);
}

bool GridMap::is_free(CellIndex c) const { return in_bounds(c) && free_[offset(c)] != 0; }

void GridMap::set_free(CellIndex c) {
  if (!in_bounds(c)) throw ConfigError("GridMap::set_free: cell outside the map bounds");
  free_[offset(c)] = 1;
}

WallColor GridMap::color(CellIndex c) const {
  return in_bounds(c) ? colors_[offset(c)] : WallColor::kNone;
}

void GridMap::set_color(CellIndex c, WallColor color) {
  if (!in_bounds(c)) throw ConfigError("GridMap::set_color: cell outside the map bounds");
  colors_[offset(c)] = color;
}

RayHit GridMap::cast(double x, double y, double dx, double dy, double range) const {
  CellIndex c = cell_of(x, y);
  if (!is_free(c)) return {0.0, true, color(c)};

  constexpr double kInf = std::numeric_limits<double>::infinity();
  const int step_x = dx > 0.0 ? 1 : (dx < 0.0 ? -1 : 0);
  const int step_y = dy > 0.0 ? 1 : (dy < 0.0 ? -1 : 0);
  double t_max_x = step_x > 0 ? ((c.x + 1) * cell_ - x) / dx : step_x < 0 ? (c.x * cell_ - x) / dx : kInf;
  double t_max_y = step_y > 0 ? ((c.y + 1) * cell_ - y) / dy : step_y < 0 ? (c.y * cell_ - y) / dy : kInf;
  const double t_delta_x = step_x != 0 ? cell_ / std::abs(dx) : kInf;
  const double t_delta_y = step_y != 0 ? cell_ / std::abs(dy) : kInf;

  while (true) {
    double t;
    if (t_max_x < t_max_y) {
      t = t_max_x;
      c.x += step_x;
      t_max_x += t_delta_x;
    } else {
      t = t_max_y;
      c.y += step_y;
      t_max_y += t_delta_y;
    }
    if (t >= range) return {range, false, WallColor::kNone};
    if (!is_free(c)) return {t, true, color(c)};
  }
}

bool GridMap::blocked(double x0, double y0, double x1, double y1) const {
  const double dx = x1 - x0;
  const double dy = y1 - y0;
  const double length = std::hypot(dx, dy);
  if (length == 0.0) return !is_free(cell_of(x0, y0));
  const RayHit hit = cast(x0, y0, dx / length, dy / length, length);
  return hit.hit || !is_free(cell_of(x1, y1));
}

}  // namespace samo::envs
