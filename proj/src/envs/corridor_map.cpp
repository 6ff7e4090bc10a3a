#include "samo/envs/corridor_map.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "samo/errors.hpp"

namespace samo::envs {

namespace {

constexpr CellIndex kDirs[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

CellIndex add(CellIndex a, CellIndex b, int scale = 1) {
  return {a.x + scale * b.x, a.y + scale * b.y};
}

std::string turn_name(Turn t) {
  switch (t) {
    case Turn::kLeft: return "left";
    case Turn::kRight: return "right";
    case Turn::kNone: break;
  }
  return "none";
}

std::string color_name(WallColor c) {
  switch (c) {
    case WallColor::kGreen: return "green";
    case WallColor::kRed: return "red";
    case WallColor::kNone: break;
  }
  return "none";
}

}  // namespace

CorridorMap parse_corridor_map(const std::string& text) {
  CorridorMap map;
  map.segments.clear();
  std::istringstream lines(text);
  std::string line;
  int line_no = 0;
  while (std::getline(lines, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream in(line);
    std::string key;
    if (!(in >> key)) continue;
    auto fail = [&](const std::string& why) {
      throw FormatError("map line " + std::to_string(line_no) + ": " + why);
    };
    if (key == "half_width") {
      if (!(in >> map.half_width) || !(map.half_width > 0.0)) fail("half_width needs a positive number");
    } else if (key == "spawn") {
      std::string mode;
      in >> mode;
      if (mode == "both") map.spawn_both_ends = true;
      else if (mode == "start") map.spawn_both_ends = false;
      else fail("spawn must be 'both' or 'start'");
    } else if (key == "segment") {
      Segment s;
      std::string turn;
      if (!(in >> s.length >> turn) || s.length < 1) fail("segment needs <cells >= 1> <turn>");
      if (turn == "left") s.turn = Turn::kLeft;
      else if (turn == "right") s.turn = Turn::kRight;
      else if (turn == "none") s.turn = Turn::kNone;
      else fail("unknown turn '" + turn + "'");
      std::string word;
      while (in >> word) {
        if (word == "none") s.color = WallColor::kNone;
        else if (word == "green") s.color = WallColor::kGreen;
        else if (word == "red") s.color = WallColor::kRed;
        else if (word == "dead_end") {
          if (!(in >> s.dead_end) || s.dead_end < 1) fail("dead_end needs a positive cell count");
        } else fail("unexpected token '" + word + "'");
      }
      if (s.color != WallColor::kNone && s.turn == Turn::kNone) fail("colour cues need a turn");
      if (s.color != WallColor::kNone && s.length < 3) fail("colour cues need a segment of >= 3 cells");
      map.segments.push_back(s);
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  if (map.segments.empty()) throw FormatError("map has no segments");
  return map;
}

std::string serialize_corridor_map(const CorridorMap& map) {
  std::ostringstream out;
  out.precision(17);
  out << "half_width " << map.half_width << "\n";
  out << "spawn " << (map.spawn_both_ends ? "both" : "start") << "\n";
  for (const auto& s : map.segments) {
    out << "segment " << s.length << ' ' << turn_name(s.turn) << ' ' << color_name(s.color)
        << " dead_end " << s.dead_end << "\n";
  }
  return out.str();
}

CorridorMap load_corridor_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open map file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_corridor_map(text.str());
}

CorridorMap default_two_turn_map() {
  CorridorMap map;
  map.segments = {{8, Turn::kLeft}, {60, Turn::kRight}, {8, Turn::kNone}};
  return map;
}

CorridorMap default_color_map() {
  CorridorMap map;
  map.spawn_both_ends = false;
  map.segments = {{8, Turn::kLeft, WallColor::kGreen},
                  {10, Turn::kLeft, WallColor::kRed},
                  {10, Turn::kRight, WallColor::kGreen},
                  {10, Turn::kRight, WallColor::kRed},
                  {40, Turn::kNone}};
  return map;
}

BuiltCorridor build_corridor(const CorridorMap& map) {
  if (map.segments.empty()) throw ConfigError("corridor map has no segments");
  std::vector<CellIndex> path;
  std::vector<int> dirs;
  std::vector<CellIndex> extra;  // dead-end stubs
  struct Cue {
    CellIndex cell;
    WallColor color;
  };
  std::vector<Cue> cues;

  CellIndex cur{0, 0};
  int dir = 0;
  for (std::size_t i = 0; i < map.segments.size(); ++i) {
    const Segment& s = map.segments[i];
    for (int k = 0; k < s.length; ++k) {
      if (i > 0 || k > 0) cur = add(cur, kDirs[dir]);
      path.push_back(cur);
      dirs.push_back(dir);
    }
    if (s.turn == Turn::kNone) continue;
    const int turn_dir = (dir + (s.turn == Turn::kLeft ? 1 : 3)) % 4;
    if (s.color != WallColor::kNone) {
      const int stub_dir = (turn_dir + 2) % 4;
      for (int m = 1; m <= s.dead_end; ++m) extra.push_back(add(cur, kDirs[stub_dir], m));
      const int cue_dir = s.color == WallColor::kGreen ? turn_dir : stub_dir;
      const std::size_t last = path.size() - 1;
      for (std::size_t back = 1; back <= 2; ++back) {
        cues.push_back({add(path[last - back], kDirs[cue_dir]), s.color});
      }
    }
    dir = turn_dir;
  }

  CellIndex lo = path.front();
  CellIndex hi = path.front();
  for (const auto& group : {std::cref(path), std::cref(extra)}) {
    for (const auto& c : group.get()) {
      lo = {std::min(lo.x, c.x), std::min(lo.y, c.y)};
      hi = {std::max(hi.x, c.x), std::max(hi.y, c.y)};
    }
  }
  GridMap grid(2.0 * map.half_width, {lo.x - 1, lo.y - 1}, {hi.x + 1, hi.y + 1});
  for (const auto& c : path) grid.set_free(c);
  for (const auto& c : extra) grid.set_free(c);
  for (const auto& cue : cues) {
    if (grid.is_free(cue.cell)) throw ConfigError("corridor map: colour cue lands on a free cell");
    grid.set_color(cue.cell, cue.color);
  }
  return {std::move(grid), std::move(path), std::move(dirs)};
}

}  // namespace samo::envs
