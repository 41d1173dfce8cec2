//
// rtmol - Copyright 2026 The rtmol Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <random>

#include "json.hpp"

#include "rtmol/error.h"
#include "rtmol/theory/theory.h"

namespace rtmol {
namespace {

constexpr double kRowTolerance = 1e-12;

Error invalid(const std::string &why) {
  return Error(ErrorCode::kInvalidSystem, "InvalidSystem: " + why);
}

Error unsupported_zero(const std::string &why) {
  return Error(ErrorCode::kUnsupportedZero, "UnsupportedZero: " + why);
}

void check_stochastic(const Eigen::MatrixXd &m, const char *name) {
  if ((m.array() < 0).any() || !m.allFinite())
    throw invalid(std::string(name) + " has a negative or non-finite entry");
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (std::abs(m.row(r).sum() - 1.0) > kRowTolerance)
      throw invalid(std::string(name) + " row " + std::to_string(r)
                    + " does not sum to 1");
  }
}

// Uniform in [0, 1) from the top 53 bits; portable across standard libraries.
double uniform01(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Eigen::VectorXd random_simplex(std::mt19937_64 &rng, int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i)
    v[i] = -std::log(1.0 - uniform01(rng)) + 1e-3;
  return v / v.sum();
}

}  // namespace

void validate_system(const DiscreteSystem &sys) {
  const int nx = sys.num_x();
  if (nx < 1 || sys.p_theta.rows() != nx || sys.p_theta.cols() < 1
      || sys.q_phi.rows() != sys.p_theta.cols() || sys.q_phi.cols() != nx
      || sys.dist.rows() != nx || sys.dist.cols() != nx)
    throw invalid("inconsistent shapes");
  Eigen::MatrixXd px = sys.px.transpose();
  check_stochastic(px, "px");
  check_stochastic(sys.p_theta, "p_theta");
  check_stochastic(sys.q_phi, "q_phi");
  for (int i = 0; i < nx; ++i) {
    if (sys.dist(i, i) != 0.0)
      throw invalid("distance diagonal must be zero");
    for (int j = 0; j < nx; ++j) {
      if (!(sys.dist(i, j) >= 0.0) || sys.dist(i, j) != sys.dist(j, i))
        throw invalid("distance must be symmetric and non-negative");
    }
  }
}

double entropy_x(const DiscreteSystem &sys) {
  double h = 0;
  for (int x = 0; x < sys.num_x(); ++x) {
    if (sys.px[x] > 0)
      h -= sys.px[x] * std::log(sys.px[x]);
  }
  return h;
}

Eigen::VectorXd marginal_y(const DiscreteSystem &sys) {
  return sys.p_theta.transpose() * sys.px;
}

Eigen::MatrixXd posterior(const DiscreteSystem &sys) {
  const Eigen::VectorXd py = marginal_y(sys);
  Eigen::MatrixXd post(sys.num_y(), sys.num_x());
  for (int y = 0; y < sys.num_y(); ++y) {
    for (int x = 0; x < sys.num_x(); ++x) {
      post(y, x) = py[y] > 0 ? sys.px[x] * sys.p_theta(x, y) / py[y]
                             : 1.0 / sys.num_x();
    }
  }
  return post;
}

double mutual_information(const DiscreteSystem &sys) {
  validate_system(sys);
  const Eigen::VectorXd py = marginal_y(sys);
  double mi = 0;
  for (int x = 0; x < sys.num_x(); ++x) {
    for (int y = 0; y < sys.num_y(); ++y) {
      double joint = sys.px[x] * sys.p_theta(x, y);
      if (joint > 0)
        mi += joint * (std::log(sys.p_theta(x, y)) - std::log(py[y]));
    }
  }
  return std::max(mi, 0.0);
}

double ba_lower_bound(const DiscreteSystem &sys) {
  validate_system(sys);
  double e = 0;
  for (int x = 0; x < sys.num_x(); ++x) {
    for (int y = 0; y < sys.num_y(); ++y) {
      double joint = sys.px[x] * sys.p_theta(x, y);
      if (joint <= 0)
        continue;
      if (sys.q_phi(y, x) <= 0)
        throw unsupported_zero("q(x=" + std::to_string(x) + "|y="
                               + std::to_string(y)
                               + ") = 0 under positive joint mass");
      e += joint * std::log(sys.q_phi(y, x));
    }
  }
  return entropy_x(sys) + e;
}

double lipschitz_constant(const DiscreteSystem &sys) {
  validate_system(sys);
  if ((sys.q_phi.array() <= 0).any())
    throw unsupported_zero("q_phi has a zero entry");
  double l = 0;
  for (int y = 0; y < sys.num_y(); ++y) {
    for (int a = 0; a < sys.num_x(); ++a) {
      for (int b = a + 1; b < sys.num_x(); ++b) {
        double d = sys.dist(a, b);
        if (d <= 0)
          throw unsupported_zero("zero distance between distinct symbols "
                                 + std::to_string(a) + " and "
                                 + std::to_string(b));
        double diff =
            std::abs(std::log(sys.q_phi(y, a)) - std::log(sys.q_phi(y, b)));
        l = std::max(l, diff / d);
      }
    }
  }
  return l;
}

bool bound_holds(const BoundReport &r) {
  return r.mi >= r.mi_lower - kTheoryTolerance
         && r.mi >= r.ba_bound - kTheoryTolerance;
}

BoundReport check_mi_bound(const DiscreteSystem &sys) {
  BoundReport r;
  r.mi = mutual_information(sys);
  r.entropy_x = entropy_x(sys);
  r.ba_bound = ba_lower_bound(sys);
  r.lipschitz_L = lipschitz_constant(sys);
  r.alpha = r.lipschitz_L;

  const Eigen::VectorXd py = marginal_y(sys);
  for (int y = 0; y < sys.num_y(); ++y) {
    double c_y = 0;
    for (int xp = 0; xp < sys.num_x(); ++xp)
      c_y += sys.q_phi(y, xp) * std::log(sys.q_phi(y, xp));
    r.c_term += py[y] * c_y;
  }
  for (int x = 0; x < sys.num_x(); ++x) {
    for (int y = 0; y < sys.num_y(); ++y) {
      double joint = sys.px[x] * sys.p_theta(x, y);
      for (int xp = 0; xp < sys.num_x(); ++xp)
        r.expected_distance += joint * sys.q_phi(y, xp) * sys.dist(x, xp);
    }
  }
  r.mi_lower = r.entropy_x - r.alpha * r.expected_distance + r.c_term;
  r.holds = bound_holds(r);
  return r;
}

std::string bound_report_json(const BoundReport &r) {
  nlohmann::ordered_json j;
  j["mi"] = r.mi;
  j["entropy_x"] = r.entropy_x;
  j["ba_bound"] = r.ba_bound;
  j["lipschitz_L"] = r.lipschitz_L;
  j["alpha"] = r.alpha;
  j["expected_distance"] = r.expected_distance;
  j["c_term"] = r.c_term;
  j["mi_lower"] = r.mi_lower;
  j["holds"] = r.holds;
  return j.dump();
}

DiscreteSystem random_system(std::uint64_t seed, int max_size) {
  std::mt19937_64 rng(seed);
  max_size = std::max(max_size, 2);
  auto draw_size = [&] {
    return 2 + static_cast<int>(uniform01(rng) * (max_size - 1));
  };
  const int nx = draw_size();
  const int ny = draw_size();
  DiscreteSystem sys;
  sys.px = random_simplex(rng, nx);
  sys.p_theta.resize(nx, ny);
  for (int x = 0; x < nx; ++x)
    sys.p_theta.row(x) = random_simplex(rng, ny).transpose();
  sys.q_phi.resize(ny, nx);
  for (int y = 0; y < ny; ++y)
    sys.q_phi.row(y) = random_simplex(rng, nx).transpose();
  sys.dist = Eigen::MatrixXd::Zero(nx, nx);
  for (int a = 0; a < nx; ++a) {
    for (int b = a + 1; b < nx; ++b) {
      double d = 0.25 + 2.75 * uniform01(rng);
      sys.dist(a, b) = sys.dist(b, a) = d;
    }
  }
  return sys;
}

DiscreteSystem with_posterior_generator(const DiscreteSystem &sys) {
  DiscreteSystem out = sys;
  out.q_phi = posterior(sys);
  return out;
}

}  // namespace rtmol
