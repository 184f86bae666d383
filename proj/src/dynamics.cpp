#include "etmas/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace etmas {

namespace {

std::string shape(const Eigen::MatrixXd& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

LinearDynamics::LinearDynamics(Eigen::MatrixXd a, Eigen::MatrixXd b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_.rows() == 0 || a_.rows() != a_.cols()) throw DynamicsError("A must be square and nonempty, got " + shape(a_));
  if (b_.rows() != a_.rows() || b_.cols() == 0)
    throw DynamicsError("B must have " + std::to_string(a_.rows()) + " rows, got " + shape(b_));
  drift_free_ = a_.isZero(0.0);
}

LinearDynamics LinearDynamics::single_integrator(Eigen::Index dim) {
  return {Eigen::MatrixXd::Zero(dim, dim), Eigen::MatrixXd::Identity(dim, dim)};
}

void check_compatible(const LinearDynamics& dyn, const GainMatrix& k) {
  if (k.K().rows() != dyn.input_dim() || k.K().cols() != dyn.state_dim()) {
    throw DynamicsError("K must be " + std::to_string(dyn.input_dim()) + "x" + std::to_string(dyn.state_dim()) +
                        ", got " + shape(k.K()));
  }
}

bool GainReport::all_hurwitz() const {
  return std::all_of(modes.begin(), modes.end(), [](const ModeStability& m) { return m.hurwitz; });
}

double max_real_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, false);
  return solver.eigenvalues().real().maxCoeff();
}

GainReport verify_gain(const LinearDynamics& dyn, const GainMatrix& k, const LaplacianSpectrum& spectrum) {
  check_compatible(dyn, k);
  if (spectrum.multiplicity_of_zero != 1)
    throw DynamicsError("gain verification needs a connected graph (exactly one zero Laplacian eigenvalue)");

  GainReport report;
  const Eigen::MatrixXd bk = dyn.B() * k.K();
  for (double lambda : spectrum.nonzero()) {
    const double re = max_real_eigenvalue(dyn.A() - lambda * bk);
    report.modes.push_back({lambda, re, re < kHurwitzMargin});
  }
  return report;
}

Eigen::VectorXd propagate(const LinearDynamics& dyn, const Eigen::VectorXd& x, const Eigen::VectorXd& u, double dt) {
  if (!(dt > 0.0)) throw DynamicsError("step must be positive");
  if (x.size() != dyn.state_dim() || u.size() != dyn.input_dim()) throw DynamicsError("state/input size mismatch");
  if (!x.allFinite() || !u.allFinite()) throw DynamicsError("non-finite state or input");

  const Eigen::VectorXd bu = dyn.B() * u;
  if (dyn.drift_free()) return x + dt * bu;

  // RK4 sub-steps with |A| h <= kMaxStiffStep keep the step accurate when the
  // caller's dt is coarse relative to the drift; at the default dt this is one.
  const double a_norm = dyn.A().cwiseAbs().rowwise().sum().maxCoeff();
  const auto substeps = static_cast<int>(std::max(1.0, std::ceil(dt * a_norm / kMaxStiffStep)));
  const double h = dt / substeps;

  const auto f = [&](const Eigen::VectorXd& s) -> Eigen::VectorXd { return dyn.A() * s + bu; };
  Eigen::VectorXd y = x;
  for (int k = 0; k < substeps; ++k) {
    const Eigen::VectorXd k1 = f(y);
    const Eigen::VectorXd k2 = f(y + 0.5 * h * k1);
    const Eigen::VectorXd k3 = f(y + 0.5 * h * k2);
    const Eigen::VectorXd k4 = f(y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

}  // namespace etmas
