#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bipolar/rng.hpp"

namespace bipolar {

// Covariance of the limiting two-dimensional Brownian motion:
// alpha * [[1, rho], [rho, 1]] with rho = -cos(4*pi/kappa').
struct CovarianceSpec {
    double kappa_prime = 12.0;
    double alpha = 1.0;

    double rho() const { return -std::cos(4.0 * 3.14159265358979323846 / kappa_prime); }
    bool valid() const { return kappa_prime > 4.0 && alpha > 0.0; }
};

enum class PathKind { Bm, Bridge, ExcursionUpper, ExcursionRight, ReflectedWithLocalTime, Skew };

struct SampledPath {
    double dt = 0.0;
    PathKind kind = PathKind::Bm;
    std::vector<double> first;  // L-like coordinate (empty for scalar paths)
    std::vector<double> second; // R-like / constrained coordinate
};

// Correlated planar Brownian motion on a dt-grid, exact at grid points.
inline SampledPath sample_bm(const CovarianceSpec& spec, double T, double dt, std::uint64_t seed) {
    if (!(dt > 0) || T < dt) throw std::invalid_argument("sample_bm: bad grid");
    if (!spec.valid()) throw std::invalid_argument("sample_bm: bad covariance spec");
    std::size_t n = std::size_t(std::llround(T / dt));
    SampledPath p;
    p.dt = dt;
    p.kind = PathKind::Bm;
    p.first.assign(n + 1, 0.0);
    p.second.assign(n + 1, 0.0);
    Rng rng(seed);
    const double rho = spec.rho();
    const double sd = std::sqrt(spec.alpha * dt);
    const double c = std::sqrt(1.0 - rho * rho);
    for (std::size_t i = 1; i <= n; ++i) {
        double g1 = rng.normal(), g2 = rng.normal();
        double dr = sd * g2;
        double dl = sd * (c * g1 + rho * g2);
        p.first[i] = p.first[i - 1] + dl;
        p.second[i] = p.second[i - 1] + dr;
    }
    return p;
}

namespace detail {

// Standard Brownian bridge 0 -> z on [0,T], unit variance rate.
inline std::vector<double> bridge(Rng& rng, double T, double dt, double z) {
    std::size_t n = std::size_t(std::llround(T / dt));
    std::vector<double> b(n + 1, 0.0);
    double sd = std::sqrt(dt);
    for (std::size_t i = 1; i <= n; ++i) b[i] = b[i - 1] + sd * rng.normal();
    double bn = b[n];
    for (std::size_t i = 0; i <= n; ++i)
        b[i] += (z - bn) * (double(i) / double(n));
    return b;
}

// Standard Brownian excursion on [0,T] as the norm of a 3d Brownian bridge;
// the finite-dimensional laws at grid points are exact.
inline std::vector<double> excursion(Rng& rng, double T, double dt) {
    auto b1 = bridge(rng, T, dt, 0.0);
    auto b2 = bridge(rng, T, dt, 0.0);
    auto b3 = bridge(rng, T, dt, 0.0);
    std::vector<double> e(b1.size());
    for (std::size_t i = 0; i < e.size(); ++i)
        e[i] = std::sqrt(b1[i] * b1[i] + b2[i] * b2[i] + b3[i] * b3[i]);
    return e;
}

} // namespace detail

// Brownian excursion in the upper half plane in time T with covariance
// matrix of `spec`, exiting at (horizontal_endpoint, 0). The decorrelating
// map A(x,y) = ((x - rho*y)/sqrt(1-rho^2), y) fixes the horizontal axis; the
// construction is bridge x excursion in the A-coordinates, pulled back.
inline SampledPath sample_half_plane_excursion(const CovarianceSpec& spec, double T, double dt,
                                               double horizontal_endpoint, std::uint64_t seed) {
    if (!(T > 0)) throw std::invalid_argument("half_plane_excursion: T <= 0");
    Rng rng(seed);
    const double rho = spec.rho();
    const double c = std::sqrt(1.0 - rho * rho);
    const double sa = std::sqrt(spec.alpha);
    auto e = detail::excursion(rng, T, dt);
    auto b = detail::bridge(rng, T, dt, horizontal_endpoint / (c * sa));
    SampledPath p;
    p.dt = dt;
    p.kind = PathKind::ExcursionUpper;
    p.first.resize(e.size());
    p.second.resize(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        double yhat = sa * e[i];
        double xhat = sa * b[i];
        p.first[i] = c * xhat + rho * yhat; // A^{-1}
        p.second[i] = yhat;
    }
    p.second.front() = 0.0;
    p.second.back() = 0.0;
    return p;
}

// The right-half-plane version: constrained first coordinate.
inline SampledPath sample_right_half_plane_excursion(const CovarianceSpec& spec, double T,
                                                     double dt, double vertical_endpoint,
                                                     std::uint64_t seed) {
    SampledPath p = sample_half_plane_excursion(spec, T, dt, vertical_endpoint, seed);
    std::swap(p.first, p.second);
    p.kind = PathKind::ExcursionRight;
    return p;
}

// The coupled pair (Z, X) of the continuum excursion decomposition: X is a
// skew Brownian motion (a standard one at p = 1/2) scaled by sqrt(alpha);
// within each excursion of X away from 0 the constrained coordinate of Z
// follows X exactly and the transverse coordinate is an independent motion.
struct ExcursionProcessSample {
    SampledPath z; // (L, R)
    SampledPath x; // scalar in `second`
    std::vector<std::size_t> run_starts; // grid indices where excursions begin
    std::vector<int> run_signs;          // +1 upper-half-plane, -1 right-half-plane
};

inline ExcursionProcessSample sample_excursion_process(double T, double dt, double p,
                                                       const CovarianceSpec& spec,
                                                       std::uint64_t seed) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("excursion process: p in (0,1)");
    std::size_t n = std::size_t(std::llround(T / dt));
    Rng rng(seed);
    const double sa = std::sqrt(spec.alpha);
    std::vector<double> x(n + 1, 0.0);
    double sd = sa * std::sqrt(dt);
    for (std::size_t i = 1; i <= n; ++i) x[i] = x[i - 1] + sd * rng.normal();

    ExcursionProcessSample out;
    // sign runs; resample each run's sign independently with probability p up
    std::size_t i = 1;
    while (i <= n) {
        std::size_t a = i;
        int s = x[a] >= 0 ? +1 : -1;
        while (i + 1 <= n && ((x[i + 1] >= 0) == (s > 0))) ++i;
        int ns = rng.uniform01() < p ? +1 : -1;
        if (ns != s)
            for (std::size_t k = a; k <= i; ++k) x[k] = -x[k];
        out.run_starts.push_back(a - 1);
        out.run_signs.push_back(ns);
        ++i;
    }
    out.x.dt = dt;
    out.x.kind = PathKind::Skew;
    out.x.second = x;

    const double rho = spec.rho();
    const double c = std::sqrt(1.0 - rho * rho);
    out.z.dt = dt;
    out.z.kind = PathKind::Bm;
    out.z.first.assign(n + 1, 0.0);
    out.z.second.assign(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
        double dx = x[k] - x[k - 1];
        double dw = sa * std::sqrt(dt) * rng.normal();
        double dl, dr;
        if (x[k] >= 0) {
            dr = dx;
            dl = rho * dx + c * dw;
        } else {
            dl = -dx;
            dr = -rho * dx + c * dw;
        }
        out.z.first[k] = out.z.first[k - 1] + dl;
        out.z.second[k] = out.z.second[k - 1] + dr;
    }
    return out;
}

// Exact single-value sampler: standard Brownian excursion at time t in [0,T].
inline double excursion_marginal(Rng& rng, double T, double t) {
    double s2 = t * (T - t) / T;
    double a = rng.normal(), b = rng.normal(), c = rng.normal();
    return std::sqrt(s2 * (a * a + b * b + c * c));
}

// Epsilon-occupation estimator of the local time at 0 of a scalar path, in
// quadratic-variation units: (1/eps) * sum 1{0 <= X < eps} dqv.
inline double occupation_local_time(const std::vector<double>& x, double eps) {
    if (x.size() < 2 || !(eps > 0)) throw std::invalid_argument("occupation_local_time");
    double acc = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        double d = x[i] - x[i - 1];
        if (x[i - 1] >= 0.0 && x[i - 1] < eps) acc += d * d;
    }
    return acc / eps;
}

} // namespace bipolar
