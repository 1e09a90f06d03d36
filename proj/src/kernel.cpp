// SPDX-License-Identifier: Apache-2.0

#include "choquard/kernel.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

#include <unistd.h>

#include "choquard/constants.hpp"
#include "choquard/errors.hpp"
#include "choquard/gauss.hpp"
#include "choquard/radial.hpp"

namespace choquard {

namespace {

constexpr double kPi = 3.14159265358979323846;

}  // namespace

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
    if (n < 1) throw ValidationError("gauss_legendre: need n >= 1");
    std::vector<double> x(n), w(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p0 / pp;
            if (std::fabs(z - z1) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    return {x, w};
}

namespace {

// Panel-subdivided quadrature table for the polar-angle integral: dyadic
// panels accumulate toward theta = 0 where the near-diagonal kernel is stiff.
struct ThetaTable {
    std::vector<double> s2;    // sin^2(theta/2) per node
    std::vector<double> base;  // sin^{N-2}(theta) * P_l(cos theta) * weight
};

const ThetaTable& theta_table(int N, int l) {
    static std::mutex mtx;
    static std::map<std::pair<int, int>, std::unique_ptr<ThetaTable>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto& slot = cache[{N, l}];
    if (slot) return *slot;

    auto table = std::make_unique<ThetaTable>();
    constexpr int kPanels = 48;
    std::vector<double> edges;
    edges.push_back(0.0);
    for (int k = -kPanels; k < 0; ++k) edges.push_back(kPi * std::pow(2.0, k));
    edges.push_back(kPi);
    const auto [gn, gw] = gauss_legendre(12);

    const double a = (N - 2) / 2.0;
    double norm = 1.0;  // Gegenbauer value at 1 for l >= 2
    if (l >= 2) norm = gamma_fn(l + 2.0 * a) / (gamma_fn(2.0 * a) * gamma_fn(l + 1.0));

    for (size_t p = 0; p + 1 < edges.size(); ++p) {
        const double mid = 0.5 * (edges[p] + edges[p + 1]);
        const double half = 0.5 * (edges[p + 1] - edges[p]);
        for (size_t j = 0; j < gn.size(); ++j) {
            const double th = mid + half * gn[j];
            const double wt = half * gw[j];
            const double ct = std::cos(th);
            const double sh = std::sin(0.5 * th);
            double P;
            if (l == 0) {
                P = 1.0;
            } else if (l == 1) {
                P = ct;
            } else {
                double Cm = 1.0, C = 2.0 * a * ct;
                for (int k = 2; k <= l; ++k) {
                    const double Cn = (2.0 * (k + a - 1.0) * ct * C - (k + 2.0 * a - 2.0) * Cm) / k;
                    Cm = C;
                    C = Cn;
                }
                P = C / norm;
            }
            table->s2.push_back(sh * sh);
            table->base.push_back(std::pow(std::sin(th), N - 2) * P * wt);
        }
    }
    slot = std::move(table);
    return *slot;
}

double khat(double gap, double mu, int N, const ThetaTable& tab) {
    const double x = std::exp(-gap);
    const double omx = -std::expm1(-gap);  // 1 - x without cancellation
    const double omx2 = omx * omx;
    const double fourx = 4.0 * x;
    const double e = -0.5 * mu;
    double sum = 0.0;
    for (size_t j = 0; j < tab.s2.size(); ++j) {
        const double qf = omx2 + fourx * tab.s2[j];
        sum += std::pow(qf, e) * tab.base[j];
    }
    return sphere_area_sub(N) * std::pow(x, 0.5 * mu) * sum;
}

// Cubic Lagrange basis on interpolation offsets {-1, 0, 1, 2}, argument
// z = (tau - cell_start)/h in [0, 1].
inline void lagrange4(double z, double out[4]) {
    out[0] = -z * (z - 1.0) * (z - 2.0) / 6.0;
    out[1] = (z + 1.0) * (z - 1.0) * (z - 2.0) / 2.0;
    out[2] = -(z + 1.0) * z * (z - 2.0) / 2.0;
    out[3] = (z + 1.0) * z * (z - 1.0) / 6.0;
}

std::string cache_file_name(int n, double rmin, double rmax, int N, double mu, int l) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "kw1_N%d_l%d_n%d_mu%a_a%a_b%a.bin", N, l, n, mu, rmin, rmax);
    return buf;
}

bool load_weights(const std::string& path, int n, double rmin, double rmax, int N,
                  double mu, int l, int M, std::vector<double>& w) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    char magic[8] = {};
    int32_t iN = 0, il = 0, in_n = 0, iM = 0;
    double imu = 0, irmin = 0, irmax = 0;
    in.read(magic, 8);
    in.read(reinterpret_cast<char*>(&iN), 4);
    in.read(reinterpret_cast<char*>(&il), 4);
    in.read(reinterpret_cast<char*>(&in_n), 4);
    in.read(reinterpret_cast<char*>(&imu), 8);
    in.read(reinterpret_cast<char*>(&irmin), 8);
    in.read(reinterpret_cast<char*>(&irmax), 8);
    in.read(reinterpret_cast<char*>(&iM), 4);
    if (!in || std::string(magic, 8) != "CHQWGT01" || iN != N || il != l || in_n != n ||
        imu != mu || irmin != rmin || irmax != rmax || iM != M) {
        return false;
    }
    std::vector<double> tmp(2 * M + 5);
    in.read(reinterpret_cast<char*>(tmp.data()), static_cast<std::streamsize>(tmp.size() * 8));
    if (!in) return false;
    w = std::move(tmp);
    return true;
}

void store_weights(const std::string& path, int n, double rmin, double rmax, int N,
                   double mu, int l, int M, const std::vector<double>& w) {
    const std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) return;
        const int32_t iN = N, il = l, in_n = n, iM = M;
        out.write("CHQWGT01", 8);
        out.write(reinterpret_cast<const char*>(&iN), 4);
        out.write(reinterpret_cast<const char*>(&il), 4);
        out.write(reinterpret_cast<const char*>(&in_n), 4);
        out.write(reinterpret_cast<const char*>(&mu), 8);
        out.write(reinterpret_cast<const char*>(&rmin), 8);
        out.write(reinterpret_cast<const char*>(&rmax), 8);
        out.write(reinterpret_cast<const char*>(&iM), 4);
        out.write(reinterpret_cast<const char*>(w.data()), static_cast<std::streamsize>(w.size() * 8));
        if (!out) return;
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) std::filesystem::remove(tmp, ec);
}

}  // namespace

double reduced_kernel(double gap, double mu, int N, int l) {
    validate_dim_mu(N, mu);
    if (l < 0) throw ValidationError("reduced_kernel: sector l >= 0 required");
    return khat(std::fabs(gap), mu, N, theta_table(N, l));
}

double angular_kernel(double r, double s, double mu, int N, int l) {
    validate_dim_mu(N, mu);
    if (!(r > 0.0) || !(s > 0.0)) throw ValidationError("angular_kernel: r, s > 0 required");
    if (l < 0) throw ValidationError("angular_kernel: sector l >= 0 required");
    const double gap = std::fabs(std::log(s / r));
    return khat(gap, mu, N, theta_table(N, l)) * std::pow(r * s, -0.5 * mu);
}

AngularKernel::AngularKernel(GridPtr grid, double mu, int l)
    : grid_(std::move(grid)), mu_(mu), l_(l) {
    if (!grid_) throw ValidationError("AngularKernel: null grid");
    validate_dim_mu(grid_->dim(), mu);
    if (l < 0) throw ValidationError("AngularKernel: sector l >= 0 required");
    const int n = grid_->n();
    const double h = grid_->h();
    const int N = grid_->dim();
    M_ = n + 1;
    off0_ = M_ + 1;
    w_.assign(2 * M_ + 5, 0.0);

    std::string cache_path;
    if (const char* dir = std::getenv("CHOQUARD_LAB_CACHE"); dir && *dir) {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        cache_path = std::string(dir) + "/" +
                     cache_file_name(n, grid_->r_min(), grid_->r_max(), N, mu, l);
        if (load_weights(cache_path, n, grid_->r_min(), grid_->r_max(), N, mu, l, M_, w_)) {
            return;
        }
    }

    const ThetaTable& tab = theta_table(N, l);
    const double alpha = N - 0.5 * mu;
    const auto [gn8, gw8] = gauss_legendre(8);
    const auto [gn16, gw16] = gauss_legendre(16);

    const int ncells = 2 * M_ + 2;  // m = -M .. M+1
    std::vector<std::array<double, 4>> contrib(ncells, {0.0, 0.0, 0.0, 0.0});

    auto do_cell = [&](int idx) {
        const int m = idx - M_;
        const double a = m * h;
        std::vector<double> taus, wws;
        if (m == 0 || m == -1) {
            // Geometric subpanels resolve the integrable kernel singularity at tau = 0.
            const double sgn = (m == 0) ? 1.0 : -1.0;
            const double lo = 1e-12 * h;
            std::vector<double> ed;
            ed.push_back(0.0);
            for (int k = 0; k < 60; ++k) {
                const double e = lo * std::pow(2.0, k);
                if (e >= h) break;
                ed.push_back(e);
            }
            ed.push_back(h);
            for (size_t p = 0; p + 1 < ed.size(); ++p) {
                if (ed[p + 1] <= ed[p]) continue;
                const double mid = 0.5 * (ed[p] + ed[p + 1]);
                const double half = 0.5 * (ed[p + 1] - ed[p]);
                for (size_t j = 0; j < gn16.size(); ++j) {
                    taus.push_back(sgn * (mid + half * gn16[j]));
                    wws.push_back(half * gw16[j]);
                }
            }
        } else {
            const double b = (m + 1) * h;
            const auto& gn = (std::abs(m) <= 3) ? gn16 : gn8;
            const auto& gw = (std::abs(m) <= 3) ? gw16 : gw8;
            const double mid = 0.5 * (a + b);
            const double half = 0.5 * (b - a);
            for (size_t j = 0; j < gn.size(); ++j) {
                taus.push_back(mid + half * gn[j]);
                wws.push_back(half * gw[j]);
            }
        }
        double L[4];
        for (size_t j = 0; j < taus.size(); ++j) {
            const double tau = taus[j];
            const double qv = khat(std::fabs(tau), mu, N, tab) * std::exp(alpha * tau);
            lagrange4((tau - a) / h, L);
            const double qw = qv * wws[j];
            for (int k = 0; k < 4; ++k) contrib[idx][k] += L[k] * qw;
        }
    };

    unsigned nthreads = std::thread::hardware_concurrency();
    if (nthreads == 0) nthreads = 1;
    nthreads = std::min<unsigned>(nthreads, 16);
    if (nthreads <= 1) {
        for (int idx = 0; idx < ncells; ++idx) do_cell(idx);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> workers;
        workers.reserve(nthreads);
        for (unsigned t = 0; t < nthreads; ++t) {
            workers.emplace_back([&] {
                int idx;
                while ((idx = next.fetch_add(1)) < ncells) do_cell(idx);
            });
        }
        for (auto& th : workers) th.join();
    }

    // Deterministic reduction in cell order.
    static const int kOffsets[4] = {-1, 0, 1, 2};
    for (int idx = 0; idx < ncells; ++idx) {
        const int m = idx - M_;
        for (int k = 0; k < 4; ++k) w_[off0_ + m + kOffsets[k]] += contrib[idx][k];
    }

    if (!cache_path.empty()) {
        store_weights(cache_path, n, grid_->r_min(), grid_->r_max(), N, mu, l, M_, w_);
    }
}

std::vector<double> AngularKernel::apply_values(const std::vector<double>& f,
                                                const Tail& inner, const Tail& outer) const {
    const int n = grid_->n();
    const int N = grid_->dim();
    const double h = grid_->h();
    if (static_cast<int>(f.size()) != n) throw ValidationError("AngularKernel::apply: size mismatch");
    if (inner.present && N + inner.power <= 0.0) {
        throw NumericsError("riesz potential: inner tail of the density is not integrable");
    }
    if (outer.present && N - mu_ + outer.power >= 0.0) {
        throw NumericsError("riesz potential: outer tail of the density is not integrable against the kernel");
    }
    const int jlo = -(M_ + 2);
    const int jhi = n - 1 + (M_ + 3);
    std::vector<double> fx(static_cast<size_t>(jhi - jlo + 1), 0.0);
    for (int k = 0; k < n; ++k) fx[k - jlo] = f[k];
    if (inner.present) {
        for (int j = jlo; j < 0; ++j) fx[j - jlo] = f[0] * std::exp(inner.power * h * j);
    }
    if (outer.present) {
        for (int j = n; j <= jhi; ++j) fx[j - jlo] = f[n - 1] * std::exp(outer.power * h * (j - (n - 1)));
    }
    const int L = static_cast<int>(w_.size());
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        const int s = i - off0_ - jlo;
        double acc = 0.0;
        for (int k = 0; k < L; ++k) acc += w_[k] * fx[s + k];
        out[i] = acc * std::pow(grid_->r()[i], N - mu_);
    }
    return out;
}

RadialProfile AngularKernel::apply(const RadialProfile& f) const {
    if (!grid_->same_layout(f.grid())) throw ValidationError("AngularKernel::apply: grid mismatch");
    std::vector<double> vals = apply_values(f.values(), f.inner(), f.outer());
    const Tail tin = fit_tail(*grid_, vals, 0);
    const Tail tout = fit_tail(*grid_, vals, 1);
    return RadialProfile(grid_, std::move(vals), tin, tout);
}

std::shared_ptr<const AngularKernel> get_kernel(const GridPtr& grid, double mu, int l) {
    if (!grid) throw ValidationError("get_kernel: null grid");
    using Key = std::tuple<int, double, double, int, double, int>;
    static std::mutex mtx;
    static std::map<Key, std::shared_ptr<const AngularKernel>> cache;
    const Key key{grid->n(), grid->r_min(), grid->r_max(), grid->dim(), mu, l};
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto kern = std::make_shared<const AngularKernel>(grid, mu, l);
    std::lock_guard<std::mutex> lock(mtx);
    auto [it, inserted] = cache.emplace(key, kern);
    return it->second;
}

}  // namespace choquard
