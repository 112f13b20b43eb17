#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgdecay/fft.hpp"

namespace kgd {

using Field = std::vector<double>;

/// A scalar field sample and its time derivative at one instant.
struct FieldPair {
    Field value;
    Field dvalue;

    std::size_t size() const { return value.size(); }
};

inline void check_finite(std::span<const double> x, const std::string& what) {
    for (double v : x) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(what + ": non-finite entry");
        }
    }
}

/// Radially reduced half-line grid for 3D spherical symmetry.
///
/// Fields on this grid are samples of the reduced variable w(t,r) = r u(t,r)
/// with Dirichlet ends w(0) = w(R) = 0, diagonalized by the sine transform.
/// Interior nodes r_j = j R/(n+1), j = 1..n.
class RadialGrid {
public:
    RadialGrid(double R, int n) : R_(R), n_(n), h_(R / (n + 1)) {
        if (!(R > 0.0)) throw std::invalid_argument("RadialGrid: R must be positive");
        if (n < 8) throw std::invalid_argument("RadialGrid: need n >= 8");
        nodes_.resize(n);
        kappa_.resize(n);
        for (int j = 0; j < n; ++j) nodes_[j] = (j + 1) * h_;
        for (int k = 0; k < n; ++k) kappa_[k] = (k + 1) * std::numbers::pi / R;
        dst_ = std::make_shared<DstPlan>(n);
        dct_ = std::make_shared<DctPlan>(n + 2);
    }

    double outer_radius() const { return R_; }
    int size() const { return n_; }
    double spacing() const { return h_; }
    const std::vector<double>& nodes() const { return nodes_; }
    double node(int j) const { return nodes_[j]; }

    /// Laplacian-eigenvalue square root of sine mode k (0-based): (k+1) pi / R.
    double kappa(int k) const { return kappa_[k]; }
    const std::vector<double>& kappas() const { return kappa_; }

    /// Sine coefficients c_k with w_j = sum_k c_k sin(kappa_k r_j).
    Field transform_forward(std::span<const double> w) const {
        require_size(w.size());
        check_finite(w, "transform_forward");
        Field c(n_);
        dst_->execute(w.data(), c.data());
        const double scale = 1.0 / (n_ + 1);
        for (double& v : c) v *= scale;
        return c;
    }

    Field transform_inverse(std::span<const double> c) const {
        require_size(c.size());
        Field w(n_);
        dst_->execute(c.data(), w.data());
        for (double& v : w) v *= 0.5;
        return w;
    }

    /// d/dr of the sine interpolant, sampled at the interior nodes.
    Field derivative(std::span<const double> w) const {
        Field c = transform_forward(w);
        return derivative_from_coeffs(c);
    }

    /// Same, starting from sine coefficients.
    Field derivative_from_coeffs(std::span<const double> c) const {
        Field full = derivative_with_ends(c);
        return Field(full.begin() + 1, full.begin() + 1 + n_);
    }

    /// d/dr of the sine interpolant at r = 0, the interior nodes, and r = R
    /// (n + 2 values).
    Field derivative_with_ends(std::span<const double> c) const {
        require_size(c.size());
        std::vector<double> in(n_ + 2, 0.0);
        Field out(n_ + 2);
        for (int k = 0; k < n_; ++k) in[k + 1] = 0.5 * c[k] * kappa_[k];
        dct_->execute(in.data(), out.data());
        return out;
    }

    /// dw/dr at r = 0; equals the on-axis value of u = w/r.
    double derivative_at_origin(std::span<const double> c) const {
        require_size(c.size());
        double s = 0.0;
        for (int k = n_ - 1; k >= 0; --k) s += c[k] * kappa_[k];
        return s;
    }

    double origin_value(std::span<const double> w) const {
        return derivative_at_origin(transform_forward(w));
    }

    /// L^2(0,R) inner product by the exact sine-grid quadrature h * sum.
    double l2sq_reduced(std::span<const double> w) const {
        double s = 0.0;
        for (double v : w) s += v * v;
        return h_ * s;
    }

    /// ||u||^2 over R^3 of the radial field u = w/r: 4 pi int w^2 dr.
    double l2sq_3d(std::span<const double> w) const {
        return 4.0 * std::numbers::pi * l2sq_reduced(w);
    }

private:
    void require_size(std::size_t m) const {
        if (static_cast<int>(m) != n_)
            throw std::invalid_argument("RadialGrid: size mismatch");
    }

    double R_;
    int n_;
    double h_;
    std::vector<double> nodes_, kappa_;
    std::shared_ptr<DstPlan> dst_;
    std::shared_ptr<DctPlan> dct_;
};

/// Uniform periodic 3D lattice on [-L, L)^3, row-major (x3 fastest).
class BoxGrid {
public:
    BoxGrid(double L, int n) : L_(L), n_(n), h_(2.0 * L / n) {
        if (!(L > 0.0)) throw std::invalid_argument("BoxGrid: L must be positive");
        if (n < 4 || n % 2 != 0) throw std::invalid_argument("BoxGrid: need even n >= 4");
        nc_ = n / 2 + 1;
        std::vector<double> rbuf(static_cast<std::size_t>(n) * n * n);
        std::vector<std::complex<double>> cbuf(static_cast<std::size_t>(n) * n * nc_);
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fwd_ = fftw_plan_dft_r2c_3d(n, n, n, rbuf.data(),
                                    reinterpret_cast<fftw_complex*>(cbuf.data()),
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
        bwd_ = fftw_plan_dft_c2r_3d(n, n, n,
                                    reinterpret_cast<fftw_complex*>(cbuf.data()),
                                    rbuf.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    ~BoxGrid() {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }
    BoxGrid(const BoxGrid&) = delete;
    BoxGrid& operator=(const BoxGrid&) = delete;

    double half_period() const { return L_; }
    int points_per_axis() const { return n_; }
    std::size_t size() const { return static_cast<std::size_t>(n_) * n_ * n_; }
    double spacing() const { return h_; }
    std::size_t spectral_size() const { return static_cast<std::size_t>(n_) * n_ * nc_; }

    double coord(int i) const { return -L_ + i * h_; }

    /// Signed integer frequency of index i on a length-n axis.
    int freq_index(int i) const { return i <= n_ / 2 ? i : i - n_; }
    /// Wavenumber component of index i: pi k / L.
    double kappa_axis(int i) const { return freq_index(i) * std::numbers::pi / L_; }

    std::vector<std::complex<double>> transform_forward(std::span<const double> f) const {
        if (f.size() != size()) throw std::invalid_argument("BoxGrid: size mismatch");
        check_finite(f, "transform_forward");
        std::vector<double> tmp(f.begin(), f.end());
        std::vector<std::complex<double>> c(spectral_size());
        fftw_execute_dft_r2c(fwd_, tmp.data(), reinterpret_cast<fftw_complex*>(c.data()));
        const double scale = 1.0 / static_cast<double>(size());
        for (auto& v : c) v *= scale;
        return c;
    }

    Field transform_inverse(std::span<const std::complex<double>> c) const {
        if (c.size() != spectral_size()) throw std::invalid_argument("BoxGrid: size mismatch");
        std::vector<std::complex<double>> tmp(c.begin(), c.end());
        Field f(size());
        fftw_execute_dft_c2r(bwd_, reinterpret_cast<fftw_complex*>(tmp.data()), f.data());
        return f;
    }

    /// |kappa| of spectral entry (i1, i2, i3c).
    double kappa_mag(int i1, int i2, int i3) const {
        double k1 = kappa_axis(i1), k2 = kappa_axis(i2), k3 = i3 * std::numbers::pi / L_;
        return std::sqrt(k1 * k1 + k2 * k2 + k3 * k3);
    }

    template <typename F>
    void for_each_mode(F&& f) const {
        std::size_t idx = 0;
        for (int i1 = 0; i1 < n_; ++i1)
            for (int i2 = 0; i2 < n_; ++i2)
                for (int i3 = 0; i3 < nc_; ++i3, ++idx) f(idx, i1, i2, i3);
    }

    Field spectral_derivative(std::span<const double> f, int axis) const {
        if (axis < 1 || axis > 3) throw std::invalid_argument("BoxGrid: axis out of range");
        auto c = transform_forward(f);
        for_each_mode([&](std::size_t idx, int i1, int i2, int i3) {
            int i = axis == 1 ? i1 : axis == 2 ? i2 : i3;
            double k = axis == 3 ? i3 * std::numbers::pi / L_ : kappa_axis(i);
            // Nyquist mode of an odd operator is dropped.
            if (axis != 3 && freq_index(i) == n_ / 2) k = 0.0;
            c[idx] *= std::complex<double>(0.0, k);
        });
        return transform_inverse(c);
    }

    double l2sq(std::span<const double> f) const {
        double s = 0.0;
        for (double v : f) s += v * v;
        return s * h_ * h_ * h_;
    }

private:
    double L_;
    int n_, nc_;
    double h_;
    fftw_plan fwd_, bwd_;
};

/// Frequency of mode k for mass m: omega = sqrt(kappa^2 + m^2).
inline double multiplier_omega_value(double kappa, double m) {
    return std::sqrt(kappa * kappa + m * m);
}

inline void check_mass(double m) {
    if (!(m >= 0.0 && m <= 1.0))
        throw std::invalid_argument("mass parameter must lie in [0, 1]");
}

inline std::vector<double> multiplier_omega(const RadialGrid& g, double m) {
    check_mass(m);
    std::vector<double> w(g.size());
    for (int k = 0; k < g.size(); ++k) w[k] = multiplier_omega_value(g.kappa(k), m);
    return w;
}

inline std::vector<double> multiplier_omega(const BoxGrid& g, double m) {
    check_mass(m);
    std::vector<double> w(g.spectral_size());
    g.for_each_mode([&](std::size_t idx, int i1, int i2, int i3) {
        w[idx] = multiplier_omega_value(g.kappa_mag(i1, i2, i3), m);
    });
    return w;
}

}  // namespace kgd
