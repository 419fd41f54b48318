#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace idde {

struct Jump {
  double time = 0.0;
  double left = 0.0;   // x(tau - 0)
  double right = 0.0;  // x(tau)
};

/// Raw node data. `left[i]`/`dleft[i]` are the limits from the left at
/// nodes[i], `right[i]`/`dright[i]` from the right; they differ only at jumps.
struct TrajectoryData {
  std::vector<double> nodes;
  std::vector<double> left, right;
  std::vector<double> dleft, dright;
  std::vector<Jump> jumps;
  std::vector<std::string> warnings;
};

/// Piecewise cubic Hermite dense output of a solution with jumps.
///
/// Segment i spans [nodes[i], nodes[i+1]] and interpolates from the right
/// data at nodes[i] to the left data at nodes[i+1]. Queries are
/// right-continuous; `left_limit` returns x(t - 0).
class Trajectory {
 public:
  Trajectory() = default;
  /// Throws InputError on inconsistent array sizes or non-ascending nodes.
  explicit Trajectory(TrajectoryData data);

  /// Right-continuous value; throws std::out_of_range outside [t0, t_end].
  double value(double t) const;
  double operator()(double t) const { return value(t); }
  /// x(t - 0); at t0 this is x(t0).
  double left_limit(double t) const;
  /// Derivative of the dense output (right derivative at nodes).
  double derivative(double t) const;

  double t0() const { return data_.nodes.front(); }
  double t_end() const { return data_.nodes.back(); }
  std::size_t size() const { return data_.nodes.size(); }
  const std::vector<double>& nodes() const { return data_.nodes; }
  const std::vector<double>& left_values() const { return data_.left; }
  const std::vector<double>& right_values() const { return data_.right; }
  const std::vector<Jump>& jumps() const { return data_.jumps; }
  const std::vector<std::string>& warnings() const { return data_.warnings; }
  const TrajectoryData& data() const { return data_; }

  /// Hermite evaluation of segment i at t (t may lie outside the segment).
  double segment_value(std::size_t i, double t) const;

 private:
  std::size_t segment_index(double t) const;
  TrajectoryData data_;
};

/// CSV with columns t,x,is_jump,left_value. Every `stride`-th node, the last
/// node and every jump node are written; a jump emits a row with the left
/// limit (is_jump=0) followed by the post-jump row (is_jump=1, left_value set).
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, std::size_t stride = 1);

}  // namespace idde
