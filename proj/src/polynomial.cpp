/*
 * Copyright 2026 The lanekeep Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "lanekeep/polynomial.hpp"

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <utility>

#include "lanekeep/errors.hpp"

namespace lanekeep {
namespace {

// Parlett-Reinsch balancing restricted to powers of two, so the scaling is
// exact. Improves eigenvalue accuracy for badly scaled coefficients.
void balance(Eigen::MatrixXd& a) {
  constexpr double kGamma = 0.95;
  const Eigen::Index n = a.rows();
  bool changed = true;
  for (int sweep = 0; changed && sweep < 100; ++sweep) {
    changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      double row = 0.0;
      double col = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        row += std::abs(a(i, j));
        col += std::abs(a(j, i));
      }
      if (row == 0.0 || col == 0.0) continue;
      int exponent = 0;
      std::frexp(row / col, &exponent);
      exponent /= 2;
      if (exponent == 0) continue;
      const double scaled_col = std::ldexp(col, exponent);
      const double scaled_row = std::ldexp(row, -exponent);
      if (scaled_col + scaled_row < kGamma * (col + row)) {
        changed = true;
        a.row(i) *= std::ldexp(1.0, -exponent);
        a.col(i) *= std::ldexp(1.0, exponent);
      }
    }
  }
}

}  // namespace

Poly::Poly(std::vector<double> ascending) : coeffs_(std::move(ascending)) {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Poly::operator[](int k) const {
  if (k < 0 || k > degree()) return 0.0;
  return coeffs_[static_cast<std::size_t>(k)];
}

double Poly::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * x + *it;
  }
  return acc;
}

std::complex<double> Poly::operator()(std::complex<double> x) const {
  std::complex<double> acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * x + *it;
  }
  return acc;
}

Poly Poly::derivative() const {
  if (coeffs_.size() <= 1) return Poly();
  std::vector<double> out(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) {
    out[k - 1] = static_cast<double>(k) * coeffs_[k];
  }
  return Poly(std::move(out));
}

Poly Poly::reflected() const {
  std::vector<double> out = coeffs_;
  for (std::size_t k = 1; k < out.size(); k += 2) out[k] = -out[k];
  return Poly(std::move(out));
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<double> out(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
  for (std::size_t k = 0; k < a.coeffs_.size(); ++k) out[k] += a.coeffs_[k];
  for (std::size_t k = 0; k < b.coeffs_.size(); ++k) out[k] += b.coeffs_[k];
  return Poly(std::move(out));
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-1.0) * b; }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  std::vector<double> out(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
      out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return Poly(std::move(out));
}

Poly operator*(double k, const Poly& p) {
  std::vector<double> out = p.coeffs_;
  for (double& c : out) c *= k;
  return Poly(std::move(out));
}

std::vector<std::complex<double>> polynomial_roots(const Poly& p) {
  std::vector<std::complex<double>> roots;
  const int n = p.degree();
  if (n < 1) return roots;

  // Roots at the origin are peeled off exactly.
  int zeros = 0;
  while (p[zeros] == 0.0) ++zeros;
  roots.assign(static_cast<std::size_t>(zeros), {0.0, 0.0});
  const int m = n - zeros;
  if (m == 0) return roots;

  const double lead = p.leading();
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(m, m);
  for (int i = 1; i < m; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < m; ++i) companion(i, m - 1) = -p[zeros + i] / lead;
  balance(companion);

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw DomainError("companion matrix eigenvalue iteration failed");
  }
  const auto& eig = solver.eigenvalues();
  for (Eigen::Index i = 0; i < eig.size(); ++i) roots.push_back(eig(i));
  return roots;
}

bool is_hurwitz(const Poly& p) {
  const int n = p.degree();
  if (n < 0) return false;
  if (n == 0) return true;

  // Rows of the Routh array, highest power first.
  std::vector<double> upper;
  std::vector<double> lower;
  for (int k = n; k >= 0; k -= 2) upper.push_back(p[k]);
  for (int k = n - 1; k >= 0; k -= 2) lower.push_back(p[k]);
  const double sign = upper.front() > 0.0 ? 1.0 : -1.0;

  for (int row = 0; row < n; ++row) {
    if (lower.empty() || !(lower.front() * sign > 0.0)) return false;
    std::vector<double> next;
    for (std::size_t j = 0; j + 1 < upper.size(); ++j) {
      const double b = j + 1 < lower.size() ? lower[j + 1] : 0.0;
      next.push_back((lower.front() * upper[j + 1] - upper.front() * b) /
                     lower.front());
    }
    upper = std::move(lower);
    lower = std::move(next);
  }
  return true;
}

}  // namespace lanekeep
