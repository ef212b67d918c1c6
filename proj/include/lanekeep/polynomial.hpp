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

#ifndef LANEKEEP_POLYNOMIAL_HPP_
#define LANEKEEP_POLYNOMIAL_HPP_

#include <complex>
#include <vector>

namespace lanekeep {

// Real polynomial, coefficients in ascending degree. Trailing (highest
// degree) exact zeros are trimmed, so the leading coefficient is nonzero;
// the zero polynomial has degree -1.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<double> ascending);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<double>& coefficients() const { return coeffs_; }
  // Coefficient of x^k, 0 beyond the degree.
  double operator[](int k) const;
  double leading() const { return coeffs_.empty() ? 0.0 : coeffs_.back(); }

  double operator()(double x) const;
  std::complex<double> operator()(std::complex<double> x) const;

  Poly derivative() const;
  // p(-x).
  Poly reflected() const;

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(double k, const Poly& p);

 private:
  std::vector<double> coeffs_;
};

// All complex roots, as eigenvalues of the balanced companion matrix.
std::vector<std::complex<double>> polynomial_roots(const Poly& p);

// Routh-Hurwitz test: true iff every root has a strictly negative real
// part. A zero in the first column counts as not Hurwitz.
bool is_hurwitz(const Poly& p);

}  // namespace lanekeep

#endif  // LANEKEEP_POLYNOMIAL_HPP_
