#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "fsmi/sensor.hpp"

namespace fsmi {

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

// Row-major occupancy probabilities. Cell (cx, cy) covers
// [cx*res, (cx+1)*res) x [cy*res, (cy+1)*res); index = cy*width + cx.
class OccupancyGrid2D {
 public:
  OccupancyGrid2D() = default;
  OccupancyGrid2D(int width, int height, double resolution, double prior, double clamp_eps = 1e-4);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  double clamp_eps() const { return clamp_eps_; }
  std::size_t size() const { return cells_.size(); }
  double size_x() const { return width_ * resolution_; }
  double size_y() const { return height_ * resolution_; }

  double at(std::size_t i) const { return cells_[i]; }
  double at(int cx, int cy) const { return cells_[index(cx, cy)]; }
  void set(std::size_t i, double p) { cells_[i] = clamp(p); }
  std::span<const double> cells() const { return cells_; }

  std::size_t index(int cx, int cy) const {
    return static_cast<std::size_t>(cy) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(cx);
  }
  int cell_x(std::size_t i) const { return static_cast<int>(i % static_cast<std::size_t>(width_)); }
  int cell_y(std::size_t i) const { return static_cast<int>(i / static_cast<std::size_t>(width_)); }
  bool in_bounds(int cx, int cy) const { return cx >= 0 && cy >= 0 && cx < width_ && cy < height_; }
  bool contains(double x, double y) const { return x >= 0.0 && y >= 0.0 && x < size_x() && y < size_y(); }
  // Cell index of a metric point; the point must be inside the grid.
  std::size_t cell_of(double x, double y) const;
  double center_x(std::size_t i) const { return (cell_x(i) + 0.5) * resolution_; }
  double center_y(std::size_t i) const { return (cell_y(i) + 0.5) * resolution_; }

  double clamp(double p) const {
    if (p < clamp_eps_) return clamp_eps_;
    if (p > 1.0 - clamp_eps_) return 1.0 - clamp_eps_;
    return p;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  double resolution_ = 0.0;
  double clamp_eps_ = 1e-4;
  std::vector<double> cells_;
};

OccupancyGrid2D new_grid(int width, int height, double resolution, double prior = 0.5,
                         double clamp_eps = 1e-4);

struct RayTrace {
  std::vector<std::size_t> cell_indices;
  std::vector<double> boundaries;  // l_1 = 0 .. l_{n+1}
  std::vector<double> occupancies;

  std::size_t size() const { return cell_indices.size(); }
};

RayTrace ray_trace(const OccupancyGrid2D& grid, const Pose& origin, double angle, double max_range);

// Multiplies odds by delta_emp for cells passed before the measured range and
// by delta_occ for the cell containing it. A reading at max_range is a
// no-return and marks no cell occupied.
void bayes_update(OccupancyGrid2D& grid, const RayTrace& ray, double measured_range,
                  const SensorModel& sensor);

double entropy(const OccupancyGrid2D& grid);
double cell_entropy(double o);

// P5, one byte per cell (round(255*o)), top row first.
void write_pgm(const OccupancyGrid2D& grid, std::ostream& out);
OccupancyGrid2D read_pgm(std::istream& in, double resolution, double clamp_eps = 1e-4);

}  // namespace fsmi
