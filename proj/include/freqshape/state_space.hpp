#pragma once

#include <Eigen/Dense>
#include <vector>

#include "freqshape/transfer_function.hpp"

namespace freqshape::lti {

struct StateSpace {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::RowVectorXd c;
  double d = 0.0;

  [[nodiscard]] int order() const { return static_cast<int>(a.rows()); }
};

/// Controllable canonical realisation. Throws ImproperSystem.
StateSpace realize(const TransferFunction& tf);

/// C adj(sI - A) B / det(sI - A) + D via the Faddeev-LeVerrier recursion.
TransferFunction to_transfer_function(const StateSpace& ss);

/// Uniformly sampled response; t.front() == 0.
struct Trajectory {
  std::vector<double> t;
  std::vector<double> y;

  [[nodiscard]] double dt() const { return t.size() > 1 ? t[1] - t[0] : 0.0; }
};

/// Response to u(t) = magnitude for t >= 0 from rest, by exact zero-order-hold
/// discretisation (matrix exponential of [A B; 0 0] * dt). Samples t = k*dt
/// for k = 0 .. round(horizon/dt).
Trajectory step_response(const TransferFunction& tf, double magnitude, double dt, double horizon);

/// Same as step_response but simulating a realisation directly.
Trajectory step_response(const StateSpace& ss, double magnitude, double dt, double horizon);

}  // namespace freqshape::lti
