// Copyright 2026 The cojudge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>

#include "cojudge/trajectory.h"

namespace cojudge {
namespace {

// Row-conditional affinities with a per-row bandwidth matched to the
// target perplexity by bisection on the precision.
Eigen::MatrixXd Affinities(Eigen::MatrixXd const& d2, double perplexity) {
  auto const n = d2.rows();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  double const target = std::log(perplexity);
  for (Eigen::Index i = 0; i < n; ++i) {
    double beta = 1.0, lo = 0.0, hi = std::numeric_limits<double>::infinity();
    Eigen::VectorXd row(n);
    for (int iter = 0; iter < 200; ++iter) {
      double sum = 0;
      for (Eigen::Index j = 0; j < n; ++j) {
        row(j) = j == i ? 0.0 : std::exp(-d2(i, j) * beta);
        sum += row(j);
      }
      if (sum <= 0) {
        row.setConstant(1.0);
        row(i) = 0;
        sum = static_cast<double>(n - 1);
      }
      double h = 0;
      for (Eigen::Index j = 0; j < n; ++j) h += beta * d2(i, j) * row(j);
      h = std::log(sum) + h / sum;
      row /= sum;
      double const diff = h - target;
      if (std::abs(diff) < 1e-5) break;
      if (diff > 0) {
        lo = beta;
        beta = std::isinf(hi) ? beta * 2 : (beta + hi) / 2;
      } else {
        hi = beta;
        beta = (beta + lo) / 2;
      }
    }
    p.row(i) = row.transpose();
  }
  return p;
}

}  // namespace

std::vector<std::array<double, 2>> PrincipalAxes(std::vector<std::vector<double>> const& rows) {
  auto const n = static_cast<Eigen::Index>(rows.size());
  std::vector<std::array<double, 2>> out(rows.size(), {0.0, 0.0});
  if (n == 0) return out;
  auto const dim = static_cast<Eigen::Index>(rows.front().size());
  Eigen::MatrixXd x(n, dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) x(i, j) = rows[i][j];
  }
  x.rowwise() -= x.colwise().mean();
  // Scores from the eigen-decomposition of the n x n Gram matrix.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(x * x.transpose());
  auto const& vals = eig.eigenvalues();
  auto const& vecs = eig.eigenvectors();
  for (int axis = 0; axis < 2 && axis < n; ++axis) {
    auto const col = n - 1 - axis;  // ascending order
    double const lambda = vals(col);
    if (lambda <= 1e-12) continue;
    Eigen::VectorXd score = vecs.col(col) * std::sqrt(lambda);
    Eigen::Index arg;
    score.cwiseAbs().maxCoeff(&arg);
    if (score(arg) < 0) score = -score;
    for (Eigen::Index i = 0; i < n; ++i) out[i][axis] = score(i);
  }
  return out;
}

Projection TsneProject(std::map<std::string, std::vector<double>> const& vectors,
                       std::uint64_t seed, TsneOptions const& options) {
  Projection proj;
  std::vector<std::string> ids;
  std::vector<std::vector<double>> rows;
  for (auto const& [u, v] : vectors) {
    ids.push_back(u);
    rows.push_back(v);
  }
  auto const pca = PrincipalAxes(rows);
  auto const n = static_cast<Eigen::Index>(ids.size());
  if (n < 5) {
    proj.fallback = true;
    proj.method = "pca";
    for (std::size_t i = 0; i < ids.size(); ++i) proj.coords[ids[i]] = pca[i];
    return proj;
  }
  proj.method = "tsne";
  proj.perplexity = options.perplexity.value_or(std::min(5.0, static_cast<double>(n - 1) / 3.0));

  Eigen::MatrixXd d2(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double s = 0;
      for (std::size_t k = 0; k < rows[i].size(); ++k) {
        double const d = rows[i][k] - rows[j][k];
        s += d * d;
      }
      d2(i, j) = s;
    }
  }
  Eigen::MatrixXd p = Affinities(d2, proj.perplexity);
  p = (p + p.transpose()) / (2.0 * static_cast<double>(n));
  p = p.cwiseMax(1e-12);

  // Principal-axes start scaled to a small spread, plus seeded jitter.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> jitter(0.0, 1e-6);
  Eigen::MatrixXd y(n, 2);
  double sd = 0;
  for (Eigen::Index i = 0; i < n; ++i) sd += pca[i][0] * pca[i][0];
  sd = std::sqrt(sd / static_cast<double>(n));
  double const scale = sd > 0 ? 1e-4 / sd : 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int d = 0; d < 2; ++d) y(i, d) = pca[i][d] * scale + jitter(rng);
  }

  Eigen::MatrixXd update = Eigen::MatrixXd::Zero(n, 2);
  Eigen::MatrixXd gains = Eigen::MatrixXd::Ones(n, 2);
  Eigen::MatrixXd num(n, n);
  Eigen::MatrixXd grad(n, 2);
  for (int iter = 0; iter < options.iterations; ++iter) {
    double const exaggeration =
        iter < options.exaggeration_iterations ? options.early_exaggeration : 1.0;
    double const momentum = iter < 250 ? 0.5 : 0.8;
    double qsum = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      num(i, i) = 0;
      for (Eigen::Index j = i + 1; j < n; ++j) {
        double const v = 1.0 / (1.0 + (y.row(i) - y.row(j)).squaredNorm());
        num(i, j) = num(j, i) = v;
        qsum += 2 * v;
      }
    }
    grad.setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (i == j) continue;
        double const q = std::max(num(i, j) / qsum, 1e-12);
        double const mult = 4.0 * (exaggeration * p(i, j) - q) * num(i, j);
        grad.row(i) += mult * (y.row(i) - y.row(j));
      }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      for (int d = 0; d < 2; ++d) {
        bool const same_sign = (grad(i, d) > 0) == (update(i, d) > 0);
        gains(i, d) = same_sign ? std::max(gains(i, d) * 0.8, 0.01) : gains(i, d) + 0.2;
        update(i, d) = momentum * update(i, d) - options.learning_rate * gains(i, d) * grad(i, d);
        y(i, d) += update(i, d);
      }
    }
    y.rowwise() -= y.colwise().mean();
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    std::array<double, 2> z{y(i, 0), y(i, 1)};
    if (!std::isfinite(z[0]) || !std::isfinite(z[1])) z = pca[i];
    proj.coords[ids[i]] = z;
  }
  return proj;
}

}  // namespace cojudge
