#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "etmas/graph.hpp"

namespace etmas {

class DynamicsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Identical linear agent dynamics  x' = A x + B u.
class LinearDynamics {
 public:
  LinearDynamics(Eigen::MatrixXd a, Eigen::MatrixXd b);

  static LinearDynamics single_integrator(Eigen::Index dim = 1);

  const Eigen::MatrixXd& A() const { return a_; }
  const Eigen::MatrixXd& B() const { return b_; }
  Eigen::Index state_dim() const { return a_.rows(); }
  Eigen::Index input_dim() const { return b_.cols(); }
  bool drift_free() const { return drift_free_; }

 private:
  Eigen::MatrixXd a_;
  Eigen::MatrixXd b_;
  bool drift_free_ = false;
};

// Feedback gain K (m x n).
class GainMatrix {
 public:
  explicit GainMatrix(Eigen::MatrixXd k) : k_(std::move(k)) {}
  static GainMatrix scalar(double k) { return GainMatrix(Eigen::MatrixXd::Constant(1, 1, k)); }

  const Eigen::MatrixXd& K() const { return k_; }

 private:
  Eigen::MatrixXd k_;
};

void check_compatible(const LinearDynamics& dyn, const GainMatrix& k);

struct ModeStability {
  double lambda = 0.0;         // Laplacian eigenvalue
  double max_real_part = 0.0;  // of eig(A - lambda B K)
  bool hurwitz = false;
};

struct GainReport {
  std::vector<ModeStability> modes;  // one per nonzero Laplacian eigenvalue
  bool all_hurwitz() const;
};

// Max real part below this counts as Hurwitz.
inline constexpr double kHurwitzMargin = -1e-9;

double max_real_eigenvalue(const Eigen::MatrixXd& m);

// Checks A - lambda_i B K for each nonzero lambda_i. Throws DynamicsError on
// dimension mismatch or when the spectrum is not that of a connected graph.
GainReport verify_gain(const LinearDynamics& dyn, const GainMatrix& k, const LaplacianSpectrum& spectrum);

// Largest |A|_inf * h taken by one RK4 sub-step.
inline constexpr double kMaxStiffStep = 0.05;

// One fixed step of x' = A x + B u with u held constant over [t, t + dt].
// Drift-free systems are integrated exactly; others use classical RK4,
// subdivided so that |A|_inf * h <= kMaxStiffStep.
// Throws DynamicsError on dt <= 0 or non-finite x / u.
Eigen::VectorXd propagate(const LinearDynamics& dyn, const Eigen::VectorXd& x, const Eigen::VectorXd& u, double dt);

}  // namespace etmas
