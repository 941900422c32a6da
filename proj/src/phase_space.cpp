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

#include "stochprod/phase_space.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <sstream>
#include <vector>

#include <fftw3.h>

namespace stochprod {

namespace {

constexpr double kPi = std::numbers::pi;

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// In-place unnormalized 2D DFT of a row-major N x N buffer.
// sign = FFTW_BACKWARD computes sum_a x_a exp(+2 pi i j.a / N).
void fft2(std::vector<Complex>& data, int n, int sign) {
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_2d(n, n, p, p, sign, FFTW_ESTIMATE);
    }
    if (!plan) throw NumericalError("FFTW could not create a plan");
    fftw_execute(plan);
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
}

int neg(int j, int n) { return (n - j) % n; }

double parity(int k) { return (k & 1) ? -1.0 : 1.0; }

void require_same_grid(const PhaseSpaceGrid& a, const PhaseSpaceGrid& b) {
    if (!(a == b)) throw std::invalid_argument("phase-space states live on different grids");
}

void require_shape(const PhaseSpaceGrid& g, Eigen::Index rows, Eigen::Index cols) {
    if (rows != g.points() || cols != g.points()) throw DimensionError("array shape differs from grid");
}

Moments predicted(const Moments& rho, const Moments& fid, const Moments& sigma) {
    Moments m;
    m.mass = 1.0;
    m.mean = rho.mean - fid.mean + sigma.mean;
    m.cov = rho.cov + fid.cov + sigma.cov;
    return m;
}

}  // namespace

PhaseSpaceGrid::PhaseSpaceGrid(int points, double extent) : n_(points), l_(extent) {
    if (points < 4 || (points & (points - 1)) != 0) throw std::invalid_argument("grid points per axis must be a power of two >= 4");
    if (!(extent > 0) || !std::isfinite(extent)) throw std::invalid_argument("grid extent must be positive and finite");
}

double PhaseSpaceGrid::dk() const { return kPi / l_; }

double GaussianState::uncertainty_margin() const {
    Eigen::Matrix2cd m;
    m << cov(0, 0), Complex(cov(0, 1), 0.5), Complex(cov(1, 0), -0.5), cov(1, 1);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

RealGrid GaussianState::wigner(const PhaseSpaceGrid& g) const { return gaussian_density(g, mean, cov); }

ComplexGrid GaussianState::characteristic(const PhaseSpaceGrid& g) const { return gaussian_characteristic(g, mean, cov); }

RealGrid gaussian_density(const PhaseSpaceGrid& g, const Eigen::Vector2d& mean, const Eigen::Matrix2d& cov) {
    const double det = cov.determinant();
    if (!(det > 0)) throw std::invalid_argument("Gaussian covariance must be positive definite");
    const Eigen::Matrix2d inv = cov.inverse();
    const double norm = 1.0 / (2 * kPi * std::sqrt(det));
    const int n = g.points();
    RealGrid w(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const Eigen::Vector2d d(g.x(a) - mean(0), g.x(b) - mean(1));
            w(a, b) = norm * std::exp(-0.5 * d.dot(inv * d));
        }
    return w;
}

ComplexGrid gaussian_characteristic(const PhaseSpaceGrid& g, const Eigen::Vector2d& mean, const Eigen::Matrix2d& cov) {
    const int n = g.points();
    ComplexGrid c(n, n);
    for (int j1 = 0; j1 < n; ++j1)
        for (int j2 = 0; j2 < n; ++j2) {
            const Eigen::Vector2d k(-g.k(j2), g.k(j1));  // chi(q, p) = F(-p, q)
            c(j1, j2) = std::exp(Complex(-0.5 * k.dot(cov * k), k.dot(mean)));
        }
    return c;
}

ComplexGrid delta_characteristic(const PhaseSpaceGrid& g) { return ComplexGrid::Ones(g.points(), g.points()); }

double PhaseSpaceState::normalization() const {
    const double h = grid.spacing();
    return wigner.sum() * h * h;
}

PhaseSpaceState from_gaussian(const PhaseSpaceGrid& g, const GaussianState& s) {
    if (!s.admissible(1e-12)) {
        std::ostringstream os;
        os << "Gaussian state violates the uncertainty relation (margin " << s.uncertainty_margin() << ")";
        throw std::invalid_argument(os.str());
    }
    return {g, s.wigner(g), s.characteristic(g)};
}

PhaseSpaceState fock_state(const PhaseSpaceGrid& g, int n) {
    if (n < 0 || n > 4) throw std::invalid_argument("fock_state: index must be in 0..4");
    const int np = g.points();
    RealGrid w(np, np);
    const double sign = parity(n);
    for (int a = 0; a < np; ++a)
        for (int b = 0; b < np; ++b) {
            const double r2 = g.x(a) * g.x(a) + g.x(b) * g.x(b);
            w(a, b) = sign / kPi * std::exp(-r2) * std::laguerre(static_cast<unsigned>(n), 2 * r2);
        }
    return {g, std::move(w), std::nullopt};
}

ComplexGrid symplectic_fourier(const ComplexGrid& in, const PhaseSpaceGrid& g, FourierDirection dir) {
    const int n = g.points();
    require_shape(g, in.rows(), in.cols());
    const double h = g.spacing();
    std::vector<Complex> buf(static_cast<std::size_t>(n) * n);
    ComplexGrid out(n, n);
    if (dir == FourierDirection::forward) {
        for (int a1 = 0; a1 < n; ++a1)
            for (int a2 = 0; a2 < n; ++a2) buf[a1 * n + a2] = parity(a1 + a2) * in(a1, a2);
        fft2(buf, n, FFTW_BACKWARD);
        // F(k1, k2) = int f exp(i k.x); chi[j1][j2] = F[neg(j2)][j1]
        for (int j1 = 0; j1 < n; ++j1)
            for (int j2 = 0; j2 < n; ++j2) {
                const int m1 = neg(j2, n), m2 = j1;
                out(j1, j2) = h * h * parity(m1 + m2) * buf[m1 * n + m2];
            }
    } else {
        for (int m1 = 0; m1 < n; ++m1)
            for (int m2 = 0; m2 < n; ++m2) buf[m1 * n + m2] = parity(m1 + m2) * in(m2, neg(m1, n));
        fft2(buf, n, FFTW_FORWARD);
        const double s = 1.0 / (static_cast<double>(n) * h * static_cast<double>(n) * h);
        for (int a1 = 0; a1 < n; ++a1)
            for (int a2 = 0; a2 < n; ++a2) out(a1, a2) = s * parity(a1 + a2) * buf[a1 * n + a2];
    }
    return out;
}

ComplexGrid characteristic_of(const PhaseSpaceState& s) {
    if (s.chi) return *s.chi;
    return symplectic_fourier(s.wigner.cast<Complex>(), s.grid, FourierDirection::forward);
}

Moments moments(const PhaseSpaceGrid& g, const RealGrid& w) {
    require_shape(g, w.rows(), w.cols());
    const int n = g.points();
    const double h2 = g.spacing() * g.spacing();
    Moments m;
    double s = 0, sq = 0, sp = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            s += w(a, b);
            sq += g.x(a) * w(a, b);
            sp += g.x(b) * w(a, b);
        }
    m.mass = s * h2;
    if (s == 0) return m;
    m.mean << sq / s, sp / s;
    double cqq = 0, cpp = 0, cqp = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const double dq = g.x(a) - m.mean(0), dp = g.x(b) - m.mean(1);
            cqq += dq * dq * w(a, b);
            cpp += dp * dp * w(a, b);
            cqp += dq * dp * w(a, b);
        }
    m.cov << cqq / s, cqp / s, cqp / s, cpp / s;
    return m;
}

void check_support(const PhaseSpaceGrid& g, const Moments& m, const std::string& what) {
    for (int axis = 0; axis < 2; ++axis) {
        const double var = m.cov(axis, axis);
        const double reach = std::abs(m.mean(axis)) + 6.0 * std::sqrt(std::max(var, 0.0));
        if (!(reach <= g.extent())) {
            std::ostringstream os;
            os << what << ": support reaches " << reach << " on the " << (axis == 0 ? "q" : "p")
               << " axis (|mean| + 6 sigma), beyond the grid extent " << g.extent()
               << "; enlarge the grid to avoid periodization error";
            throw std::invalid_argument(os.str());
        }
    }
}

RealGrid reflect(const RealGrid& w) {
    const auto n = static_cast<int>(w.rows());
    RealGrid r(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) r(a, b) = w(neg(a, n), neg(b, n));
    return r;
}

RealGrid convolve_grid(const PhaseSpaceGrid& g, const RealGrid& f, const RealGrid& k) {
    const int n = g.points();
    require_shape(g, f.rows(), f.cols());
    require_shape(g, k.rows(), k.cols());
    // x_c - x_a = x_{c - a + N/2}, so shift the kernel by N/2 and convolve circularly
    std::vector<Complex> bf(static_cast<std::size_t>(n) * n), bk(bf.size());
    const int half = n / 2;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            bf[a * n + b] = f(a, b);
            bk[a * n + b] = k((a + half) % n, (b + half) % n);
        }
    fft2(bf, n, FFTW_FORWARD);
    fft2(bk, n, FFTW_FORWARD);
    for (std::size_t i = 0; i < bf.size(); ++i) bf[i] *= bk[i];
    fft2(bf, n, FFTW_BACKWARD);
    const double h = g.spacing();
    const double s = h * h / (static_cast<double>(n) * n);
    RealGrid out(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) out(a, b) = s * bf[a * n + b].real();
    return out;
}

PhaseSpaceState quantum_convolution_char(const ComplexGrid& mu_char, const PhaseSpaceState& rho,
                                         const PhaseSpaceState& fid, const PhaseSpaceState& sigma) {
    require_same_grid(rho.grid, fid.grid);
    require_same_grid(rho.grid, sigma.grid);
    const PhaseSpaceGrid& g = rho.grid;
    require_shape(g, mu_char.rows(), mu_char.cols());
    const int n = g.points();
    if (std::abs(mu_char(n / 2, n / 2) - Complex(1.0)) > 1e-9)
        throw std::invalid_argument("quantum_convolution_char: measure characteristic must equal 1 at the origin");
    const Moments mr = moments(g, rho.wigner), mt = moments(g, fid.wigner), ms = moments(g, sigma.wigner);
    check_support(g, mr, "rho");
    check_support(g, mt, "fiducial");
    check_support(g, ms, "sigma");
    check_support(g, predicted(mr, mt, ms), "product");
    const ComplexGrid cr = characteristic_of(rho), ct = characteristic_of(fid), cs = characteristic_of(sigma);
    const ComplexGrid prod = mu_char.cwiseProduct(cr).cwiseProduct(ct.conjugate()).cwiseProduct(cs);
    const ComplexGrid w = symplectic_fourier(prod, g, FourierDirection::inverse);
    PhaseSpaceState out{g, w.real(), prod};
    check_support(g, moments(g, out.wigner), "product");
    return out;
}

PhaseSpaceState quantum_convolution_wigner(const PhaseSpaceState& rho, const PhaseSpaceState& fid,
                                           const PhaseSpaceState& sigma) {
    require_same_grid(rho.grid, fid.grid);
    require_same_grid(rho.grid, sigma.grid);
    const PhaseSpaceGrid& g = rho.grid;
    const Moments mr = moments(g, rho.wigner), mt = moments(g, fid.wigner), ms = moments(g, sigma.wigner);
    check_support(g, mr, "rho");
    check_support(g, mt, "fiducial");
    check_support(g, ms, "sigma");
    check_support(g, predicted(mr, mt, ms), "product");
    const RealGrid inner = convolve_grid(g, rho.wigner, reflect(fid.wigner));
    return {g, convolve_grid(g, inner, sigma.wigner), std::nullopt};
}

RealGrid husimi_kano(const PhaseSpaceState& rho, const GaussianState& fid) {
    const PhaseSpaceGrid& g = rho.grid;
    const RealGrid kernel = gaussian_density(g, -fid.mean, fid.cov);  // reflected fiducial
    return convolve_grid(g, rho.wigner, kernel);
}

GaussianState gaussian_oracle(const GaussianState& rho, const GaussianState& fid, const GaussianState& sigma,
                              const Eigen::Vector2d& prob_mean, const Eigen::Matrix2d& prob_cov) {
    for (const auto* s : {&rho, &fid, &sigma})
        if (!s->admissible(1e-12)) throw std::invalid_argument("gaussian_oracle: inadmissible input state");
    GaussianState out;
    out.mean = rho.mean - fid.mean + sigma.mean + prob_mean;
    out.cov = rho.cov + fid.cov + sigma.cov + prob_cov;
    if (!out.admissible(1e-12)) throw NumericalError("gaussian_oracle: output violates the uncertainty relation");
    return out;
}

Eigen::VectorXd marginal_q(const PhaseSpaceGrid& g, const RealGrid& w) {
    require_shape(g, w.rows(), w.cols());
    return w.rowwise().sum() * g.spacing();
}

void write_state_binary(const std::string& path, const PhaseSpaceState& s, const std::string& representation) {
    static_assert(std::endian::native == std::endian::little, "binary state format assumes a little-endian host");
    const int n = s.grid.points();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    nlohmann::json header = {{"schema", 1},
                             {"points", n},
                             {"extent", s.grid.extent()},
                             {"representation", representation},
                             {"dtype", "f64le"}};
    f << header.dump() << '\n';
    if (representation == "wigner") {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                const double v = s.wigner(a, b);
                f.write(reinterpret_cast<const char*>(&v), sizeof v);
            }
    } else if (representation == "characteristic") {
        const ComplexGrid c = characteristic_of(s);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                const double re = c(a, b).real(), im = c(a, b).imag();
                f.write(reinterpret_cast<const char*>(&re), sizeof re);
                f.write(reinterpret_cast<const char*>(&im), sizeof im);
            }
    } else {
        throw std::invalid_argument("representation must be \"wigner\" or \"characteristic\"");
    }
    if (!f) throw std::runtime_error("write failed for " + path);
}

PhaseSpaceState read_state_binary(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::getline(f, line);
    const auto header = nlohmann::json::parse(line);
    if (header.value("schema", 0) != 1 || header.value("dtype", "") != "f64le")
        throw std::invalid_argument("unsupported phase-space state header in " + path);
    const PhaseSpaceGrid g(header.at("points").get<int>(), header.at("extent").get<double>());
    const int n = g.points();
    const std::string rep = header.at("representation").get<std::string>();
    auto read = [&]() {
        double v = 0;
        if (!f.read(reinterpret_cast<char*>(&v), sizeof v)) throw std::runtime_error("truncated phase-space state " + path);
        return v;
    };
    PhaseSpaceState s{g, RealGrid(n, n), std::nullopt};
    if (rep == "wigner") {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) s.wigner(a, b) = read();
    } else if (rep == "characteristic") {
        ComplexGrid c(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                const double re = read();
                c(a, b) = Complex(re, read());
            }
        s.wigner = symplectic_fourier(c, g, FourierDirection::inverse).real();
        s.chi = std::move(c);
    } else {
        throw std::invalid_argument("unknown representation \"" + rep + "\" in " + path);
    }
    return s;
}

void write_csv_slice(const std::string& path, const PhaseSpaceGrid& g, const RealGrid& w, int p_index) {
    require_shape(g, w.rows(), w.cols());
    if (p_index < 0 || p_index >= g.points()) throw std::out_of_range("write_csv_slice: p index out of range");
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f << "q,value\n" << std::setprecision(17);
    for (int a = 0; a < g.points(); ++a) f << g.x(a) << ',' << w(a, p_index) << '\n';
}

}  // namespace stochprod
