#pragma once

// Noisy planar waypoint tracking and execution-time collision auditing.
//
// The robot is a point double integrator driven by a cascade of two PID
// loops: position error -> velocity command (clamped to max_speed), velocity
// error -> acceleration (clamped to max_accel). Dynamics run in meters; the
// stored trajectory is in cell units so it overlays the map directly.

#include <cstdint>
#include <string>
#include <vector>

#include "skelnav/grid.hpp"
#include "skelnav/roadmap.hpp"

namespace skelnav {

struct RobotParams {
  double mass = 0.5;          // kg
  double arm_length = 0.17;   // m
  double footprint_radius = 0.34;  // m, twice the arm length
  double max_accel = 5.0;     // m/s^2
  double max_speed = 1.0;     // m/s
  double cell_size = 0.1;     // m per cell

  void validate() const;
};

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
};

struct TrackerGains {
  PidGains position;
  PidGains velocity;
};

/// The shipped gain profile; its closed loop is critically damped.
TrackerGains default_gains();

struct TrackOptions {
  double noise_sigma = 0.0;  // m, per-axis position measurement noise
  double dt = 0.05;          // s, in (0, 0.1]; also the measurement rate
  std::uint64_t seed = 0;
  double capture_radius = 0.5;  // cells, intermediate waypoints
  double goal_tolerance = 0.1;  // cells, final waypoint
  double timeout = 60.0;        // s simulated
};

struct TrajectorySample {
  double t = 0.0;
  double x = 0.0;   // cells
  double y = 0.0;   // cells
  double vx = 0.0;  // cells/s
  double vy = 0.0;  // cells/s
};

struct ExecutedTrajectory {
  std::vector<TrajectorySample> samples;
  double dt = 0.0;
  /// Set when the goal was not captured before the timeout; the samples up
  /// to that point are kept.
  bool timed_out = false;
  std::size_t waypoints_reached = 0;
};

/// Drops interior waypoints that lie on the segment joining their neighbours.
std::vector<Point> simplify_collinear(const std::vector<Point>& waypoints);

ExecutedTrajectory track(const Path& path, const RobotParams& robot, const TrackerGains& gains,
                         const TrackOptions& options);

enum class RiskFlag : std::uint8_t { None = 0, Risk = 1, Collision = 2 };
const char* risk_flag_name(RiskFlag f);

struct RiskReport {
  std::vector<double> clearance;  // cells, 0 inside occupied cells
  std::vector<RiskFlag> flags;
  double threshold_cells = 0.0;
  std::size_t risk_count = 0;       // includes collisions
  std::size_t collision_count = 0;
  double risk_fraction = 0.0;
  double collision_fraction = 0.0;
};

/// Samples outside the map count as collisions with zero clearance.
RiskReport audit_collisions(const ExecutedTrajectory& traj, const OccupancyGrid& grid, const ClearanceField& field,
                            const RobotParams& robot);

std::string format_trajectory_csv(const ExecutedTrajectory& traj, const RiskReport& report);

}  // namespace skelnav
