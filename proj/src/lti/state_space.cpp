#include "freqshape/state_space.hpp"

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

#include "freqshape/errors.hpp"

namespace freqshape::lti {

StateSpace realize(const TransferFunction& tf) {
  if (!tf.is_proper()) throw ImproperSystem("realize: numerator degree exceeds denominator degree");

  const int n = tf.den().degree();
  StateSpace ss;
  ss.a = Eigen::MatrixXd::Zero(n, n);
  ss.b = Eigen::VectorXd::Zero(n);
  ss.c = Eigen::RowVectorXd::Zero(n);
  ss.d = tf.num().coeff(static_cast<std::size_t>(n));
  if (n == 0) return ss;

  // den is monic: s^n + a_{n-1} s^{n-1} + ... + a_0.
  for (int k = 0; k + 1 < n; ++k) ss.a(k, k + 1) = 1.0;
  for (int k = 0; k < n; ++k) {
    ss.a(n - 1, k) = -tf.den().coeff(static_cast<std::size_t>(k));
    ss.c(k) = tf.num().coeff(static_cast<std::size_t>(k)) - ss.d * tf.den().coeff(static_cast<std::size_t>(k));
  }
  ss.b(n - 1) = 1.0;
  return ss;
}

TransferFunction to_transfer_function(const StateSpace& ss) {
  const int n = ss.order();
  if (n == 0) return TransferFunction::gain(ss.d);

  // Faddeev-LeVerrier: det(sI - A) = sum c_k s^k, adj(sI - A) = sum_k M_k s^{n-k}.
  std::vector<double> charpoly(static_cast<std::size_t>(n) + 1, 0.0);
  charpoly[static_cast<std::size_t>(n)] = 1.0;
  std::vector<double> numer(static_cast<std::size_t>(n) + 1, 0.0);

  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k <= n; ++k) {
    m = ss.a * m + charpoly[static_cast<std::size_t>(n - k + 1)] * identity;
    numer[static_cast<std::size_t>(n - k)] = ss.c * m * ss.b;
    charpoly[static_cast<std::size_t>(n - k)] = -(ss.a * m).trace() / k;
  }
  for (int k = 0; k <= n; ++k) numer[static_cast<std::size_t>(k)] += ss.d * charpoly[static_cast<std::size_t>(k)];
  return {Polynomial(std::move(numer)), Polynomial(std::move(charpoly))};
}

Trajectory step_response(const StateSpace& ss, double magnitude, double dt, double horizon) {
  if (!(dt > 0.0)) throw InvalidParameter("step_response: dt must be positive");
  if (!(horizon >= dt)) throw InvalidParameter("step_response: horizon must be at least dt");

  const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
  Trajectory out;
  out.t.resize(steps + 1);
  out.y.resize(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) out.t[k] = static_cast<double>(k) * dt;

  const int n = ss.order();
  if (n == 0) {
    std::fill(out.y.begin(), out.y.end(), ss.d * magnitude);
    return out;
  }

  Eigen::MatrixXd augmented = Eigen::MatrixXd::Zero(n + 1, n + 1);
  augmented.topLeftCorner(n, n) = ss.a * dt;
  augmented.topRightCorner(n, 1) = ss.b * dt;
  const Eigen::MatrixXd phi = augmented.exp();
  const Eigen::MatrixXd ad = phi.topLeftCorner(n, n);
  const Eigen::VectorXd bd = phi.topRightCorner(n, 1) * magnitude;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd next(n);
  const double feedthrough = ss.d * magnitude;
  for (std::size_t k = 0; k <= steps; ++k) {
    out.y[k] = ss.c.dot(x) + feedthrough;
    next.noalias() = ad * x;
    x = next + bd;
  }
  return out;
}

Trajectory step_response(const TransferFunction& tf, double magnitude, double dt, double horizon) {
  return step_response(realize(tf), magnitude, dt, horizon);
}

}  // namespace freqshape::lti
