#include "riskgap/sim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "riskgap/errors.hpp"

namespace riskgap::sim {
namespace {

double cross(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

}  // namespace

WallMap::WallMap(std::vector<Segment> walls) : walls_(std::move(walls)) {
  if (walls_.empty()) throw InvalidArgument("map has no walls");
}

WallMap WallMap::hallway(const HallwayConfig& cfg) {
  if (!(cfg.first_leg > cfg.width) || !(cfg.width > 0.0) || !(cfg.exit_leg > 0.0))
    throw InvalidArgument("hallway dimensions must be positive with first_leg > width");
  const double h = cfg.width / 2.0;
  const double xo = cfg.first_leg;           // outer wall of the turn
  const double xi = cfg.first_leg - cfg.width;  // inner wall of the exit leg
  const double yend = -h - cfg.exit_leg;
  const std::vector<Vec2> poly = {{0.0, -h}, {xi, -h}, {xi, yend}, {xo, yend}, {xo, h}, {0.0, h}};
  std::vector<Segment> walls;
  for (std::size_t i = 0; i < poly.size(); ++i) walls.push_back({poly[i], poly[(i + 1) % poly.size()]});
  return WallMap(std::move(walls));
}

double WallMap::ray_cast(Vec2 o, double angle, double max_range) const {
  const double dx = std::cos(angle);
  const double dy = std::sin(angle);
  double best = max_range;
  for (const auto& w : walls_) {
    const double ex = w.b.x - w.a.x;
    const double ey = w.b.y - w.a.y;
    const double denom = cross(dx, dy, ex, ey);
    if (denom == 0.0) continue;  // parallel
    const double ax = w.a.x - o.x;
    const double ay = w.a.y - o.y;
    const double r = cross(ax, ay, ex, ey) / denom;
    const double s = cross(ax, ay, dx, dy) / denom;
    if (r >= 0.0 && s >= 0.0 && s <= 1.0) best = std::min(best, r);
  }
  return best;
}

double point_segment_distance(Vec2 p, const Segment& s) {
  const double ex = s.b.x - s.a.x;
  const double ey = s.b.y - s.a.y;
  const double len2 = ex * ex + ey * ey;
  double u = 0.0;
  if (len2 > 0.0) u = std::clamp(((p.x - s.a.x) * ex + (p.y - s.a.y) * ey) / len2, 0.0, 1.0);
  return std::hypot(p.x - (s.a.x + u * ex), p.y - (s.a.y + u * ey));
}

double WallMap::nearest_wall_distance(Vec2 p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& w : walls_) best = std::min(best, point_segment_distance(p, w));
  return best;
}

bool WallMap::inside(Vec2 p) const {
  bool in = false;
  for (const auto& w : walls_) {
    const bool straddles = (w.a.y > p.y) != (w.b.y > p.y);
    if (!straddles) continue;
    const double x_cross = w.a.x + (p.y - w.a.y) * (w.b.x - w.a.x) / (w.b.y - w.a.y);
    if (p.x < x_cross) in = !in;
  }
  return in;
}

double WallMap::signed_distance(Vec2 p) const {
  const double d = nearest_wall_distance(p);
  return inside(p) ? d : -d;
}

WallMap read_map_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("map file is empty");
  std::vector<Segment> walls;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    double v[4];
    for (double& x : v) {
      if (!std::getline(ss, cell, ',')) throw InvalidArgument("map row needs 4 values: " + line);
      x = std::stod(cell);
    }
    walls.push_back({{v[0], v[1]}, {v[2], v[3]}});
  }
  return WallMap(std::move(walls));
}

void write_map_csv(std::ostream& out, const WallMap& map) {
  out << "x1,y1,x2,y2\n";
  for (const auto& w : map.walls()) out << w.a.x << ',' << w.a.y << ',' << w.b.x << ',' << w.b.y << '\n';
}

}  // namespace riskgap::sim
