// Copyright 2026 The stochprod Authors
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

#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "stochprod/operator.hpp"

namespace stochprod {

using RealGrid = Eigen::MatrixXd;      // (a, b) -> value at (q_a, p_b)
using ComplexGrid = Eigen::MatrixXcd;  // (j1, j2) -> value at frequency (k_j1, k_j2)

/// One-mode phase space sampled on [-L, L)^2 with N points per axis (N a power of
/// two). Positions x_a = -L + a h, h = 2L/N; frequencies k_j = (j - N/2) pi/L.
class PhaseSpaceGrid {
   public:
    PhaseSpaceGrid() = default;
    PhaseSpaceGrid(int points, double extent);

    int points() const { return n_; }
    double extent() const { return l_; }
    double spacing() const { return 2.0 * l_ / n_; }
    double x(int a) const { return -l_ + a * spacing(); }
    double k(int j) const { return (j - n_ / 2) * dk(); }
    double dk() const;
    bool operator==(const PhaseSpaceGrid& o) const { return n_ == o.n_ && l_ == o.l_; }

   private:
    int n_ = 0;
    double l_ = 0;
};

/// hbar = 1; vacuum W = exp(-(q^2 + p^2))/pi with covariance diag(1/2, 1/2).
struct GaussianState {
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    Eigen::Matrix2d cov = Eigen::Matrix2d::Identity() / 2.0;

    static GaussianState vacuum() { return {}; }
    /// min eigenvalue of cov + (i/2) Omega, >= 0 for physical states.
    double uncertainty_margin() const;
    bool admissible(double tol = 1e-12) const { return uncertainty_margin() >= -tol; }
    RealGrid wigner(const PhaseSpaceGrid& g) const;
    ComplexGrid characteristic(const PhaseSpaceGrid& g) const;
};

/// Classical Gaussian probability density (no uncertainty constraint).
RealGrid gaussian_density(const PhaseSpaceGrid& g, const Eigen::Vector2d& mean, const Eigen::Matrix2d& cov);
/// Its characteristic function in the symplectic convention.
ComplexGrid gaussian_characteristic(const PhaseSpaceGrid& g, const Eigen::Vector2d& mean, const Eigen::Matrix2d& cov);
/// chi == 1, the Dirac measure at the origin.
ComplexGrid delta_characteristic(const PhaseSpaceGrid& g);

struct PhaseSpaceState {
    PhaseSpaceGrid grid;
    RealGrid wigner;
    std::optional<ComplexGrid> chi;

    double normalization() const;  // integral of W
};

PhaseSpaceState from_gaussian(const PhaseSpaceGrid& g, const GaussianState& s);
/// Fock state |n>, n <= 4: W_n = (-1)^n/pi exp(-r^2) L_n(2 r^2).
PhaseSpaceState fock_state(const PhaseSpaceGrid& g, int n);

enum class FourierDirection { forward, inverse };

/// forward: chi(q, p) = int W(q~, p~) exp(i(q p~ - p q~)); inverse recovers W.
ComplexGrid symplectic_fourier(const ComplexGrid& in, const PhaseSpaceGrid& g, FourierDirection dir);
ComplexGrid characteristic_of(const PhaseSpaceState& s);

struct Moments {
    double mass = 0;
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
};
Moments moments(const PhaseSpaceGrid& g, const RealGrid& w);

/// Throws std::invalid_argument when |mean| + 6 sigma exceeds L on either axis.
void check_support(const PhaseSpaceGrid& g, const Moments& m, const std::string& what);

/// chi_out = chi_mu chi_rho conj(chi_T) chi_sigma, transformed back to a Wigner array.
PhaseSpaceState quantum_convolution_char(const ComplexGrid& mu_char, const PhaseSpaceState& rho,
                                         const PhaseSpaceState& fid, const PhaseSpaceState& sigma);
/// W_out = (W_rho * W^_T) * W_sigma with W^_T(x) = W_T(-x), by circular FFT convolution.
PhaseSpaceState quantum_convolution_wigner(const PhaseSpaceState& rho, const PhaseSpaceState& fid,
                                           const PhaseSpaceState& sigma);
/// (f * g)(x) = int f(y) g(x - y) dy on the grid.
RealGrid convolve_grid(const PhaseSpaceGrid& g, const RealGrid& f, const RealGrid& h);
/// W(x) -> W(-x)
RealGrid reflect(const RealGrid& w);

/// W_rho * W^_fid; for the vacuum fiducial this is (1/pi) int W exp(-|x - x~|^2).
RealGrid husimi_kano(const PhaseSpaceState& rho, const GaussianState& fid = GaussianState::vacuum());

/// Means add with the fiducial reflected, covariances add.
GaussianState gaussian_oracle(const GaussianState& rho, const GaussianState& fid, const GaussianState& sigma,
                              const Eigen::Vector2d& prob_mean = Eigen::Vector2d::Zero(),
                              const Eigen::Matrix2d& prob_cov = Eigen::Matrix2d::Zero());

/// Position marginal int W dp.
Eigen::VectorXd marginal_q(const PhaseSpaceGrid& g, const RealGrid& w);

/// Header line {"schema":1,"points","extent","representation","dtype":"f64le"} followed
/// by raw little-endian doubles: N*N values for "wigner", 2*N*N interleaved re/im for
/// "characteristic". Row index is the q (or first frequency) axis.
void write_state_binary(const std::string& path, const PhaseSpaceState& s, const std::string& representation = "wigner");
PhaseSpaceState read_state_binary(const std::string& path);
/// CSV slice along q at fixed p index: columns q,value.
void write_csv_slice(const std::string& path, const PhaseSpaceGrid& g, const RealGrid& w, int p_index);

}  // namespace stochprod
