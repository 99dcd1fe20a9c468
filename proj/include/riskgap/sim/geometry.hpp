#pragma once

#include <iosfwd>
#include <vector>

namespace riskgap::sim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Segment {
  Vec2 a;
  Vec2 b;
};

struct HallwayConfig {
  double first_leg = 10.0;  ///< length of the entry corridor (m)
  double width = 1.5;       ///< corridor width (m)
  double exit_leg = 10.0;   ///< length of the leg after the 90° right turn (m)
};

/// Closed polygonal map. Walls are the polygon's edges; the free space is its interior.
class WallMap {
 public:
  explicit WallMap(std::vector<Segment> walls);

  /// Entry corridor along +x with y in [−w/2, w/2]; 90° right turn; exit leg along −y.
  static WallMap hallway(const HallwayConfig& cfg = {});

  const std::vector<Segment>& walls() const noexcept { return walls_; }

  /// Distance along the ray to the nearest wall, or max_range when nothing is hit closer.
  double ray_cast(Vec2 origin, double angle, double max_range) const;
  double nearest_wall_distance(Vec2 p) const;
  /// Even-odd point-in-polygon test.
  bool inside(Vec2 p) const;
  /// + distance to the nearest wall inside, − outside. 1-Lipschitz in p.
  double signed_distance(Vec2 p) const;

 private:
  std::vector<Segment> walls_;
};

double point_segment_distance(Vec2 p, const Segment& s);

/// CSV with header `x1,y1,x2,y2`, one wall per row.
WallMap read_map_csv(std::istream& in);
void write_map_csv(std::ostream& out, const WallMap& map);

}  // namespace riskgap::sim
