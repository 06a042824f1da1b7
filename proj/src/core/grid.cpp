#include "fsmi/grid.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "fsmi/error.hpp"

namespace fsmi {

OccupancyGrid2D::OccupancyGrid2D(int width, int height, double resolution, double prior,
                                 double clamp_eps)
    : width_(width), height_(height), resolution_(resolution), clamp_eps_(clamp_eps) {
  require(width >= 1 && height >= 1, "grid dimensions must be positive");
  require(resolution > 0.0, "grid resolution must be positive");
  require(prior > 0.0 && prior < 1.0, "prior must lie in (0, 1)");
  require(clamp_eps > 0.0 && clamp_eps < 0.5, "clamp_eps must lie in (0, 0.5)");
  cells_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), clamp(prior));
}

std::size_t OccupancyGrid2D::cell_of(double x, double y) const {
  int cx = std::min(static_cast<int>(std::floor(x / resolution_)), width_ - 1);
  int cy = std::min(static_cast<int>(std::floor(y / resolution_)), height_ - 1);
  return index(cx, cy);
}

OccupancyGrid2D new_grid(int width, int height, double resolution, double prior, double clamp_eps) {
  return OccupancyGrid2D(width, height, resolution, prior, clamp_eps);
}

RayTrace ray_trace(const OccupancyGrid2D& grid, const Pose& origin, double angle, double max_range) {
  if (!grid.contains(origin.x, origin.y)) fail(ErrorCode::invalid_argument, "ray origin outside grid");
  require(max_range > 0.0, "max_range must be positive");

  const double res = grid.resolution();
  const double dx = std::cos(angle);
  const double dy = std::sin(angle);
  std::size_t start = grid.cell_of(origin.x, origin.y);
  int cx = grid.cell_x(start);
  int cy = grid.cell_y(start);

  constexpr double inf = std::numeric_limits<double>::infinity();
  int step_x = dx > 0.0 ? 1 : -1;
  int step_y = dy > 0.0 ? 1 : -1;
  double t_max_x = inf, t_max_y = inf, t_delta_x = inf, t_delta_y = inf;
  if (std::abs(dx) > 1e-15) {
    double edge = (dx > 0.0 ? cx + 1 : cx) * res;
    t_max_x = (edge - origin.x) / dx;
    t_delta_x = res / std::abs(dx);
  }
  if (std::abs(dy) > 1e-15) {
    double edge = (dy > 0.0 ? cy + 1 : cy) * res;
    t_max_y = (edge - origin.y) / dy;
    t_delta_y = res / std::abs(dy);
  }

  // An origin on a grid line facing away from its cell starts in the neighbour.
  if (t_max_x <= 0.0) {
    cx += step_x;
    t_max_x += t_delta_x;
  }
  if (t_max_y <= 0.0) {
    cy += step_y;
    t_max_y += t_delta_y;
  }
  if (!grid.in_bounds(cx, cy)) fail(ErrorCode::invalid_argument, "ray leaves the grid at its origin");

  RayTrace ray;
  ray.boundaries.push_back(0.0);
  while (true) {
    std::size_t cell = grid.index(cx, cy);
    ray.cell_indices.push_back(cell);
    ray.occupancies.push_back(grid.at(cell));

    double t = std::min(t_max_x, t_max_y);
    if (t >= max_range) {
      ray.boundaries.push_back(max_range);
      break;
    }
    ray.boundaries.push_back(t);
    // Crossings closer than this are a corner: step diagonally so no
    // zero-width cell is emitted.
    double tie = 1e-12 * std::max(1.0, t);
    bool cross_x = t_max_x <= t + tie;
    bool cross_y = t_max_y <= t + tie;
    if (cross_x) {
      cx += step_x;
      t_max_x += t_delta_x;
    }
    if (cross_y) {
      cy += step_y;
      t_max_y += t_delta_y;
    }
    if (!grid.in_bounds(cx, cy)) break;
  }
  return ray;
}

void bayes_update(OccupancyGrid2D& grid, const RayTrace& ray, double measured_range,
                  const SensorModel& sensor) {
  require(measured_range >= 0.0, "measured range must be non-negative");
  bool hit = measured_range < sensor.max_range;
  for (std::size_t i = 0; i < ray.size(); ++i) {
    double lo = ray.boundaries[i];
    double hi = ray.boundaries[i + 1];
    double delta;
    if (hi <= measured_range) {
      delta = sensor.delta_emp;
    } else if (lo <= measured_range) {
      if (!hit) break;
      delta = sensor.delta_occ;
    } else {
      break;
    }
    std::size_t c = ray.cell_indices[i];
    double o = grid.at(c);
    double r = o / (1.0 - o) * delta;
    grid.set(c, r / (1.0 + r));
  }
}

double cell_entropy(double o) { return -o * std::log(o) - (1.0 - o) * std::log1p(-o); }

double entropy(const OccupancyGrid2D& grid) {
  double h = 0.0;
  for (double o : grid.cells()) h += cell_entropy(o);
  return h;
}

void write_pgm(const OccupancyGrid2D& grid, std::ostream& out) {
  out << "P5\n" << grid.width() << ' ' << grid.height() << "\n255\n";
  std::string row(static_cast<std::size_t>(grid.width()), '\0');
  for (int cy = grid.height() - 1; cy >= 0; --cy) {
    for (int cx = 0; cx < grid.width(); ++cx)
      row[static_cast<std::size_t>(cx)] = static_cast<char>(std::lround(255.0 * grid.at(cx, cy)));
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
  if (!out) fail(ErrorCode::io, "failed to write PGM");
}

namespace {

int read_pgm_int(std::istream& in) {
  in >> std::ws;
  while (in.peek() == '#') {
    std::string comment;
    std::getline(in, comment);
    in >> std::ws;
  }
  int v = 0;
  if (!(in >> v)) fail(ErrorCode::parse, "malformed PGM header");
  return v;
}

}  // namespace

OccupancyGrid2D read_pgm(std::istream& in, double resolution, double clamp_eps) {
  std::string magic;
  if (!(in >> magic) || magic != "P5") fail(ErrorCode::parse, "expected binary PGM (P5)");
  int w = read_pgm_int(in);
  int h = read_pgm_int(in);
  int maxval = read_pgm_int(in);
  if (w < 1 || h < 1 || maxval < 1 || maxval > 255) fail(ErrorCode::parse, "unsupported PGM dimensions");
  in.get();
  OccupancyGrid2D grid(w, h, resolution, 0.5, clamp_eps);
  std::string row(static_cast<std::size_t>(w), '\0');
  for (int cy = h - 1; cy >= 0; --cy) {
    if (!in.read(row.data(), w)) fail(ErrorCode::parse, "truncated PGM data");
    for (int cx = 0; cx < w; ++cx) {
      auto v = static_cast<unsigned char>(row[static_cast<std::size_t>(cx)]);
      grid.set(grid.index(cx, cy), static_cast<double>(v) / maxval);
    }
  }
  return grid;
}

}  // namespace fsmi
