//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef RTMOL_THEORY_THEORY_H_
#define RTMOL_THEORY_THEORY_H_

#include <cstdint>
#include <string>

#include <Eigen/Dense>

namespace rtmol {

/// Finite molecule/text system. p_theta is |X| x |Y| (rows are p(y|x)),
/// q_phi is |Y| x |X| (rows are q(x'|y)), dist is |X| x |X|.
struct DiscreteSystem {
  Eigen::VectorXd px;
  Eigen::MatrixXd p_theta;
  Eigen::MatrixXd q_phi;
  Eigen::MatrixXd dist;

  int num_x() const { return static_cast<int>(px.size()); }
  int num_y() const { return static_cast<int>(p_theta.cols()); }
};

constexpr double kTheoryTolerance = 1e-9;

/// Throws InvalidSystem on shape, sign, normalization (1e-12) or distance
/// violations.
void validate_system(const DiscreteSystem &sys);

double entropy_x(const DiscreteSystem &sys);
Eigen::VectorXd marginal_y(const DiscreteSystem &sys);
/// Exact posterior p(x|y) as a |Y| x |X| matrix; rows with p(y) = 0 are
/// uniform.
Eigen::MatrixXd posterior(const DiscreteSystem &sys);

/// E[log p(y|x) - log p(y)], natural log, 0 log 0 = 0.
double mutual_information(const DiscreteSystem &sys);

/// H(X) + E[log q(x|y)]. Throws UnsupportedZero when q(x|y) = 0 under
/// positive joint mass.
double ba_lower_bound(const DiscreteSystem &sys);

/// Smallest L with |log q(x|y) - log q(x'|y)| <= L d(x, x'). Throws
/// UnsupportedZero for a zero q entry or a zero off-diagonal distance.
double lipschitz_constant(const DiscreteSystem &sys);

struct BoundReport {
  double mi = 0;
  double entropy_x = 0;
  double ba_bound = 0;
  double lipschitz_L = 0;
  double alpha = 0;
  double expected_distance = 0;
  // E over p(y) of C_y = E_{q(x'|y)}[log q(x'|y)].
  double c_term = 0;
  double mi_lower = 0;
  bool holds = false;
};

/// holds iff mi >= mi_lower - tol and mi >= ba_bound - tol.
bool bound_holds(const BoundReport &report);

BoundReport check_mi_bound(const DiscreteSystem &sys);

std::string bound_report_json(const BoundReport &report);

/// Seeded random admissible system with |X|, |Y| drawn from [2, max_size].
/// All probabilities are strictly positive; distances are symmetric and in
/// [0.25, 3] off the diagonal.
DiscreteSystem random_system(std::uint64_t seed, int max_size = 6);

/// Copy of `sys` whose q_phi is the exact posterior.
DiscreteSystem with_posterior_generator(const DiscreteSystem &sys);

}  // namespace rtmol

#endif  // RTMOL_THEORY_THEORY_H_
