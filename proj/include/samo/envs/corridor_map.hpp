#pragma once

#include <string>
#include <vector>

#include "samo/envs/grid_map.hpp"

namespace samo::envs {

enum class Turn { kNone, kLeft, kRight };

struct Segment {
  int length = 1;  // cells, including the corner cell at its end
  Turn turn = Turn::kNone;
  // Non-none colors place a cue on two wall cells before the corner and turn
  // the corner into a T-junction with a dead-end stub on the wrong side.
  // Green sits on the side of the correct turn, red on the opposite side.
  WallColor color = WallColor::kNone;
  int dead_end = 3;
  friend bool operator==(const Segment&, const Segment&) = default;
};

struct CorridorMap {
  std::vector<Segment> segments;
  double half_width = 1.0;
  // Spawn at either end at random, or only at the start of segment 1.
  bool spawn_both_ends = true;

  friend bool operator==(const CorridorMap&, const CorridorMap&) = default;
};

// Line-oriented text:  half_width <m> | spawn both|start |
//                      segment <cells> <left|right|none> [none|green|red] [dead_end <cells>]
// '#' starts a comment.
CorridorMap parse_corridor_map(const std::string& text);
std::string serialize_corridor_map(const CorridorMap& map);
CorridorMap load_corridor_map(const std::string& path);

// Straight, left, long straight, right, straight.
CorridorMap default_two_turn_map();
// Colour-cued T-junctions; spawns at the start only.
CorridorMap default_color_map();

// Rasterized corridor plus the centre path (cell sequence from the start).
struct BuiltCorridor {
  GridMap grid;
  std::vector<CellIndex> path;
  std::vector<int> path_dirs;  // direction index (0 E, 1 N, 2 W, 3 S) per path cell
};

BuiltCorridor build_corridor(const CorridorMap& map);

}  // namespace samo::envs
