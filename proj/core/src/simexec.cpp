#include "skelnav/simexec.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "skelnav/errors.hpp"
#include "skelnav/geometry.hpp"
#include "skelnav/text_util.hpp"

namespace skelnav {

void RobotParams::validate() const {
  for (double v : {mass, arm_length, footprint_radius, max_accel, max_speed, cell_size}) {
    if (!(v > 0) || !std::isfinite(v)) throw ValueError("robot parameters must be positive and finite");
  }
}

TrackerGains default_gains() { return {{2.0, 0.0, 0.0}, {8.0, 0.0, 0.0}}; }

std::vector<Point> simplify_collinear(const std::vector<Point>& waypoints) {
  std::vector<Point> out;
  for (const auto& p : waypoints) {
    if (!out.empty() && out.back() == p) continue;
    while (out.size() >= 2) {
      const Point a = out[out.size() - 2];
      const Point b = out.back();
      const bool on_line = orient2d(a, b, p) == 0;
      const bool between = (b.x - a.x) * (p.x - b.x) + (b.y - a.y) * (p.y - b.y) > 0;
      if (!(on_line && between)) break;
      out.pop_back();
    }
    out.push_back(p);
  }
  return out;
}

namespace {

struct Vec {
  double x = 0.0;
  double y = 0.0;
};

Vec operator-(Vec a, Vec b) { return {a.x - b.x, a.y - b.y}; }
Vec operator+(Vec a, Vec b) { return {a.x + b.x, a.y + b.y}; }
Vec operator*(double s, Vec a) { return {s * a.x, s * a.y}; }
double norm(Vec a) { return std::hypot(a.x, a.y); }

Vec clamp_norm(Vec v, double limit) {
  const double n = norm(v);
  return n > limit ? (limit / n) * v : v;
}

class Pid {
 public:
  explicit Pid(PidGains g) : g_(g) {}
  Vec step(Vec error, double dt) {
    integral_ = integral_ + dt * error;
    const Vec deriv = primed_ ? (1.0 / dt) * (error - last_) : Vec{};
    last_ = error;
    primed_ = true;
    return g_.kp * error + g_.ki * integral_ + g_.kd * deriv;
  }
  void reset() {
    integral_ = {};
    primed_ = false;
  }

 private:
  PidGains g_;
  Vec integral_{};
  Vec last_{};
  bool primed_ = false;
};

}  // namespace

ExecutedTrajectory track(const Path& path, const RobotParams& robot, const TrackerGains& gains,
                         const TrackOptions& options) {
  if (path.waypoints.empty()) throw ValueError("cannot track an empty path");
  if (!(options.dt > 0 && options.dt <= 0.1)) throw ValueError("dt must lie in (0, 0.1]");
  if (!(options.noise_sigma >= 0)) throw ValueError("noise sigma must be non-negative");
  robot.validate();

  const double cs = robot.cell_size;
  const auto waypoints = simplify_collinear(path.waypoints);
  auto to_m = [cs](Point p) { return Vec{p.x * cs, p.y * cs}; };

  ExecutedTrajectory traj;
  traj.dt = options.dt;
  Vec pos = to_m(waypoints.front());
  Vec vel{};
  std::size_t target = waypoints.size() > 1 ? 1 : 0;
  traj.samples.push_back({0.0, pos.x / cs, pos.y / cs, 0.0, 0.0});
  if (waypoints.size() == 1) {
    traj.waypoints_reached = 1;
    return traj;
  }
  traj.waypoints_reached = 1;

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  Pid outer(gains.position);
  Pid inner(gains.velocity);
  const auto max_steps = static_cast<std::size_t>(std::ceil(options.timeout / options.dt - 1e-9));

  for (std::size_t k = 1; k <= max_steps; ++k) {
    Vec measured = pos;
    if (options.noise_sigma > 0) {
      measured.x += options.noise_sigma * noise(rng);
      measured.y += options.noise_sigma * noise(rng);
    }
    const Vec goal = to_m(waypoints[target]);
    const Vec v_cmd = clamp_norm(outer.step(goal - measured, options.dt), robot.max_speed);
    const Vec a_cmd = clamp_norm(inner.step(v_cmd - vel, options.dt), robot.max_accel);
    vel = vel + options.dt * a_cmd;
    pos = pos + options.dt * vel;
    traj.samples.push_back({static_cast<double>(k) * options.dt, pos.x / cs, pos.y / cs, vel.x / cs, vel.y / cs});

    const bool last = target + 1 == waypoints.size();
    const double radius = last ? options.goal_tolerance : options.capture_radius;
    if (norm(pos - to_m(waypoints[target])) <= radius * cs) {
      ++traj.waypoints_reached;
      if (last) return traj;
      ++target;
      outer.reset();
    }
  }
  traj.timed_out = true;
  return traj;
}

const char* risk_flag_name(RiskFlag f) {
  switch (f) {
    case RiskFlag::None: return "ok";
    case RiskFlag::Risk: return "risk";
    case RiskFlag::Collision: return "collision";
  }
  return "?";
}

RiskReport audit_collisions(const ExecutedTrajectory& traj, const OccupancyGrid& grid, const ClearanceField& field,
                            const RobotParams& robot) {
  robot.validate();
  RiskReport r;
  r.threshold_cells = robot.footprint_radius / robot.cell_size;
  for (const auto& s : traj.samples) {
    const int cx = static_cast<int>(std::floor(s.x));
    const int cy = static_cast<int>(std::floor(s.y));
    const double c = grid.occupied_or_outside(cx, cy) ? 0.0 : field.sample({s.x, s.y});
    RiskFlag f = RiskFlag::None;
    if (c <= 0) {
      f = RiskFlag::Collision;
      ++r.collision_count;
      ++r.risk_count;
    } else if (c * robot.cell_size < robot.footprint_radius) {
      f = RiskFlag::Risk;
      ++r.risk_count;
    }
    r.clearance.push_back(c);
    r.flags.push_back(f);
  }
  if (!traj.samples.empty()) {
    const auto n = static_cast<double>(traj.samples.size());
    r.risk_fraction = static_cast<double>(r.risk_count) / n;
    r.collision_fraction = static_cast<double>(r.collision_count) / n;
  }
  return r;
}

std::string format_trajectory_csv(const ExecutedTrajectory& traj, const RiskReport& report) {
  if (report.flags.size() != traj.samples.size()) throw DimensionMismatch("risk report does not match trajectory");
  std::ostringstream os;
  os << "t,x,y,vx,vy,clearance,flag\n";
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    const auto& s = traj.samples[i];
    os << format_double(s.t) << ',' << format_double(s.x) << ',' << format_double(s.y) << ','
       << format_double(s.vx) << ',' << format_double(s.vy) << ',' << format_double(report.clearance[i]) << ','
       << risk_flag_name(report.flags[i]) << '\n';
  }
  return os.str();
}

}  // namespace skelnav
