#include "idde/trajectory.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "idde/error.hpp"

namespace idde {

Trajectory::Trajectory(TrajectoryData data) : data_(std::move(data)) {
  const std::size_t n = data_.nodes.size();
  if (n == 0 || data_.left.size() != n || data_.right.size() != n || data_.dleft.size() != n ||
      data_.dright.size() != n)
    throw InputError("trajectory arrays must be non-empty and equally sized");
  for (std::size_t i = 1; i < n; ++i)
    if (!(data_.nodes[i - 1] < data_.nodes[i])) throw InputError("trajectory nodes must ascend");
}

std::size_t Trajectory::segment_index(double t) const {
  const auto& nodes = data_.nodes;
  if (t < nodes.front() || t > nodes.back())
    throw std::out_of_range("trajectory query at t=" + std::to_string(t) + " outside [" +
                            std::to_string(nodes.front()) + ", " + std::to_string(nodes.back()) + "]");
  auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
  return static_cast<std::size_t>(it - nodes.begin()) - 1;
}

double Trajectory::segment_value(std::size_t i, double t) const {
  const double a = data_.nodes[i];
  const double b = data_.nodes[i + 1];
  const double h = b - a;
  const double s = (t - a) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * data_.right[i] + h10 * h * data_.dright[i] + h01 * data_.left[i + 1] +
         h11 * h * data_.dleft[i + 1];
}

double Trajectory::value(double t) const {
  const std::size_t i = segment_index(t);
  if (t == data_.nodes[i]) return data_.right[i];
  return segment_value(i, t);
}

double Trajectory::left_limit(double t) const {
  const std::size_t i = segment_index(t);
  if (t == data_.nodes[i]) return i == 0 ? data_.right[0] : data_.left[i];
  return segment_value(i, t);
}

double Trajectory::derivative(double t) const {
  const std::size_t i = segment_index(t);
  if (t == data_.nodes[i]) return data_.dright[i];
  const double a = data_.nodes[i];
  const double h = data_.nodes[i + 1] - a;
  const double s = (t - a) / h;
  const double s2 = s * s;
  return ((6 * s2 - 6 * s) * data_.right[i] + (-6 * s2 + 6 * s) * data_.left[i + 1]) / h +
         (3 * s2 - 4 * s + 1) * data_.dright[i] + (3 * s2 - 2 * s) * data_.dleft[i + 1];
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, std::size_t stride) {
  stride = std::max<std::size_t>(stride, 1);
  const auto& nodes = traj.nodes();
  const auto& left = traj.left_values();
  const auto& right = traj.right_values();
  std::vector<bool> is_jump(nodes.size(), false);
  for (const Jump& j : traj.jumps()) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), j.time);
    if (it != nodes.end() && *it == j.time) is_jump[static_cast<std::size_t>(it - nodes.begin())] = true;
  }
  os << "t,x,is_jump,left_value\n" << std::setprecision(17);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (is_jump[i]) {
      os << nodes[i] << ',' << left[i] << ",0,\n";
      os << nodes[i] << ',' << right[i] << ",1," << left[i] << '\n';
    } else if (i % stride == 0 || i + 1 == nodes.size()) {
      os << nodes[i] << ',' << right[i] << ",0,\n";
    }
  }
}

}  // namespace idde
