#include "flowlines/physical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "flowlines/errors.hpp"
#include "flowlines/numerics.hpp"
#include "flowlines/spectra.hpp"

namespace flowlines::physical {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kWallSlack = 1e-10;

void require_increasing(std::span<const double> col, double x) {
    for (std::size_t j = 1; j < col.size(); ++j) {
        if (!(col[j] > col[j - 1])) {
            throw StagnationError("flow-line family is not increasing in psi at x = " + std::to_string(x) +
                                  ", rows " + std::to_string(j - 1) + " and " + std::to_string(j));
        }
    }
}

// Root of the cubic interpolant of col (uniform psi grid) at height y.
double invert_column(std::span<const double> col, double y) {
    const int n = static_cast<int>(col.size()) - 1;
    const double h = 1.0 / n;
    if (y < col.front() - kWallSlack || y > col.back() + kWallSlack) {
        throw DomainError("height " + std::to_string(y) + " outside the flow-line range [" +
                          std::to_string(col.front()) + ", " + std::to_string(col.back()) + "]");
    }
    if (y <= col.front()) return 0.0;
    if (y >= col.back()) return 1.0;
    return numerics::solve_increasing([&](double t) { return numerics::interpolate_cubic(col, h, t); },
                                      [&](double t) { return numerics::interpolate_cubic_d(col, h, t).derivative; },
                                      y, 0.0, 1.0);
}

// Rows of a synthesized on n_x points, returned column-major: [i][j].
std::vector<std::vector<double>> columns(const FlowFamily& a, int n_x) {
    std::vector<std::vector<double>> cols(static_cast<std::size_t>(n_x),
                                          std::vector<double>(static_cast<std::size_t>(a.rows())));
    for (int j = 0; j <= a.n_psi(); ++j) {
        const auto row = spectra::synthesize_real(spectra::restrict_line(a, j), n_x);
        for (int i = 0; i < n_x; ++i) cols[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = row[static_cast<std::size_t>(i)];
    }
    return cols;
}

std::vector<double> column_at(const FlowFamily& a, double x) {
    std::vector<double> col(static_cast<std::size_t>(a.rows()));
    for (int j = 0; j <= a.n_psi(); ++j) {
        col[static_cast<std::size_t>(j)] = spectra::evaluate(spectra::restrict_line(a, j), Complex(x, 0.0)).real();
    }
    return col;
}

// The line a(., psi0), interpolated cubically between family rows.
AnalyticLine line_at(const FlowFamily& a, double psi0) {
    const auto s = numerics::cubic_stencil(psi0, a.h(), a.n_psi());
    AnalyticLine out(a.order());
    for (int k = -a.order(); k <= a.order(); ++k) {
        Complex v{};
        for (int q = 0; q < 4; ++q) v += s.w[q] * a(k, s.base + q);
        out[k] = v;
    }
    return out;
}

}  // namespace

double stream_function_at(const FlowFamily& a, double x, double y) {
    const auto col = column_at(a, x);
    require_increasing(col, x);
    return invert_column(col, y);
}

PhysicalField reconstruct_streamfunction(const FlowFamily& a, const AnalyticLine& f, const AnalyticLine& g,
                                         int ny) {
    if (ny < 4) throw ResolutionError("reconstruction needs ny >= 4, got " + std::to_string(ny));
    if (a.n_psi() < 3) throw ResolutionError("reconstruction needs n_psi >= 3");

    PhysicalField fld;
    fld.ny = ny;
    {
        // Provisional x grid only to find the y range.
        const int n0 = std::max(2 * std::max({a.order(), f.order(), g.order()}) + 1, 64);
        const auto fv = spectra::synthesize_real(f, n0);
        const auto gv = spectra::synthesize_real(g, n0);
        const double y_lo = *std::min_element(fv.begin(), fv.end());
        const double y_hi = *std::max_element(gv.begin(), gv.end());
        if (!(y_hi > y_lo)) throw DomainError("empty channel");
        fld.hy = (y_hi - y_lo) / ny;
        fld.y_grid.resize(static_cast<std::size_t>(ny + 1));
        for (int l = 0; l <= ny; ++l) fld.y_grid[static_cast<std::size_t>(l)] = y_lo + l * fld.hy;
        fld.y_grid.back() = y_hi;
    }
    fld.nx = std::max(2 * std::max({a.order(), f.order(), g.order()}) + 1,
                      static_cast<int>(std::lround(2.0 * std::numbers::pi / fld.hy)));
    fld.hx = 2.0 * std::numbers::pi / fld.nx;
    fld.x_grid.resize(static_cast<std::size_t>(fld.nx));
    for (int i = 0; i < fld.nx; ++i) fld.x_grid[static_cast<std::size_t>(i)] = i * fld.hx;
    fld.lower = spectra::synthesize_real(f, fld.nx);
    fld.upper = spectra::synthesize_real(g, fld.nx);

    const auto cols = columns(a, fld.nx);
    const auto cols_x = columns(spectra::diff_x(a, 1), fld.nx);
    const auto cols_psi = columns(spectra::diff_psi(a, 1), fld.nx);

    const auto total = static_cast<std::size_t>(fld.nx) * static_cast<std::size_t>(ny + 1);
    fld.inside.assign(total, 0);
    fld.psi.assign(total, kNaN);
    fld.omega.assign(total, kNaN);
    fld.u1.assign(total, kNaN);
    fld.u2.assign(total, kNaN);

    const double h_psi = a.h();
    for (int i = 0; i < fld.nx; ++i) {
        const auto& col = cols[static_cast<std::size_t>(i)];
        require_increasing(col, fld.x_grid[static_cast<std::size_t>(i)]);
        for (int l = 0; l <= ny; ++l) {
            const double y = fld.y_grid[static_cast<std::size_t>(l)];
            if (y < fld.lower[static_cast<std::size_t>(i)] || y > fld.upper[static_cast<std::size_t>(i)]) continue;
            const double p = invert_column(col, y);
            const auto at = fld.index(i, l);
            fld.inside[at] = 1;
            fld.psi[at] = p;
            const double a_psi = numerics::interpolate_cubic(cols_psi[static_cast<std::size_t>(i)], h_psi, p);
            const double a_x = numerics::interpolate_cubic(cols_x[static_cast<std::size_t>(i)], h_psi, p);
            fld.u1[at] = 1.0 / a_psi;
            fld.u2[at] = a_x / a_psi;
        }
    }

    const double ihx2 = 1.0 / (fld.hx * fld.hx);
    const double ihy2 = 1.0 / (fld.hy * fld.hy);
    for (int l = 1; l < ny; ++l) {
        for (int i = 0; i < fld.nx; ++i) {
            const auto c = fld.index(i, l);
            const auto w = fld.index((i + fld.nx - 1) % fld.nx, l);
            const auto e = fld.index((i + 1) % fld.nx, l);
            const auto s = fld.index(i, l - 1);
            const auto n = fld.index(i, l + 1);
            if (!(fld.inside[c] && fld.inside[w] && fld.inside[e] && fld.inside[s] && fld.inside[n])) continue;
            fld.omega[c] = (fld.psi[e] - 2.0 * fld.psi[c] + fld.psi[w]) * ihx2 +
                           (fld.psi[n] - 2.0 * fld.psi[c] + fld.psi[s]) * ihy2;
        }
    }
    return fld;
}

StationarityReport verify_stationarity(const PhysicalField& fld, const VorticityProfile& F) {
    if (fld.ny < kMinVerifyNy) {
        throw ResolutionError("insufficient interior points: verification needs ny >= " +
                              std::to_string(kMinVerifyNy) + ", got " + std::to_string(fld.ny));
    }
    const double margin = 2.0 * fld.hy * (1.0 - 1e-12);
    std::vector<char> verified(fld.psi.size(), 0);
    StationarityReport rep;
    for (int l = 1; l < fld.ny; ++l) {
        const double y = fld.y_grid[static_cast<std::size_t>(l)];
        for (int i = 0; i < fld.nx; ++i) {
            const auto c = fld.index(i, l);
            if (!std::isfinite(fld.omega[c])) continue;
            if (y - fld.lower[static_cast<std::size_t>(i)] < margin || fld.upper[static_cast<std::size_t>(i)] - y < margin) continue;
            verified[c] = 1;
            ++rep.n_points;
            rep.max_pde_residual = std::max(rep.max_pde_residual, std::abs(fld.omega[c] - F(fld.psi[c])));
            const auto w = fld.index((i + fld.nx - 1) % fld.nx, l);
            const auto e = fld.index((i + 1) % fld.nx, l);
            const double div = (fld.u1[e] - fld.u1[w]) / (2.0 * fld.hx) +
                               (fld.u2[fld.index(i, l + 1)] - fld.u2[fld.index(i, l - 1)]) / (2.0 * fld.hy);
            rep.divergence_max = std::max(rep.divergence_max, std::abs(div));
        }
    }
    if (rep.n_points == 0) throw ResolutionError("insufficient interior points: no sample clears the walls");

    for (int q = 1; q <= kDriftLevels; ++q) {
        const double level = static_cast<double>(q) / (kDriftLevels + 1);
        double sum = 0.0;
        double sum2 = 0.0;
        int count = 0;
        for (int i = 0; i < fld.nx; ++i) {
            for (int l = 0; l < fld.ny; ++l) {
                const auto lo = fld.index(i, l);
                const auto hi = fld.index(i, l + 1);
                if (!verified[lo] || !verified[hi]) continue;
                if (!(fld.psi[lo] <= level && level < fld.psi[hi])) continue;
                const double s = (level - fld.psi[lo]) / (fld.psi[hi] - fld.psi[lo]);
                const double w = fld.omega[lo] + s * (fld.omega[hi] - fld.omega[lo]);
                sum += w;
                sum2 += w * w;
                ++count;
                break;
            }
        }
        if (count < 2) continue;
        const double mean = sum / count;
        const double var = std::max(0.0, sum2 / count - mean * mean);
        rep.max_vorticity_drift = std::max(rep.max_vorticity_drift, std::sqrt(var));
    }
    return rep;
}

std::vector<TracePoint> trace_particle(const FlowFamily& a, double x0, double psi0, double duration, int steps) {
    if (steps < 1) throw DomainError("trace_particle needs at least one step");
    if (!(psi0 >= 0.0 && psi0 <= 1.0)) throw DomainError("psi0 must lie in [0, 1]");
    const AnalyticLine line = line_at(a, psi0);
    const AnalyticLine line_psi = line_at(spectra::diff_psi(a, 1), psi0);
    const auto speed = [&](double x) { return 1.0 / spectra::evaluate(line_psi, Complex(x, 0.0)).real(); };
    const auto height = [&](double x) { return spectra::evaluate(line, Complex(x, 0.0)).real(); };

    std::vector<TracePoint> out;
    out.reserve(static_cast<std::size_t>(steps) + 1);
    const double dt = duration / steps;
    double x = x0;
    out.push_back({0.0, x, height(x)});
    for (int s = 1; s <= steps; ++s) {
        const double k1 = speed(x);
        const double k2 = speed(x + 0.5 * dt * k1);
        const double k3 = speed(x + 0.5 * dt * k2);
        const double k4 = speed(x + dt * k3);
        x += dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
        out.push_back({s * dt, x, height(x)});
    }
    return out;
}

}  // namespace flowlines::physical
