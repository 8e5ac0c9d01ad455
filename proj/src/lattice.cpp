#include "carlbm/lattice.hpp"

#include <cmath>
#include <iostream>
#include <numbers>

namespace carlbm::lattice {

namespace {

// Neumaier-compensated accumulator; keeps the conservation audits honest
// at the 1e-12 level.
struct Kahan {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

}  // namespace

void LatticeConfig::validate() const {
    if (nx < 1 || ny < 1)
        throw std::domain_error("LatticeConfig: grid sides must be positive, got " +
                                std::to_string(nx) + "x" + std::to_string(ny));
    if (!(tau > 0.5))
        throw std::domain_error("LatticeConfig: tau must exceed 1/2, got " + std::to_string(tau));
}

double reynolds_number(const LatticeConfig& cfg, double u0) {
    return u0 * cfg.ny / cfg.viscosity();
}

double tau_for_reynolds(double re, double u0, int ny) {
    if (re <= 0.0) throw std::domain_error("tau_for_reynolds: Re must be positive");
    return 0.5 + u0 * ny / (re * VelocitySet::cs2);
}

double mach_number(double u) { return u / std::sqrt(VelocitySet::cs2); }

BlowUpError::BlowUpError(int x_, int y_, double rho)
    : std::runtime_error("simulation blow-up: density " + std::to_string(rho) + " at site (" +
                         std::to_string(x_) + "," + std::to_string(y_) + ")"),
      x(x_),
      y(y_) {}

std::array<double, VelocitySet::q> equilibrium(double rho, double ux, double uy) {
    if (!(rho > 0.0)) throw std::domain_error("equilibrium: rho must be positive");
    constexpr double inv_cs2 = 1.0 / VelocitySet::cs2;
    const double usq = (ux * ux + uy * uy) * 0.5 * inv_cs2;
    std::array<double, VelocitySet::q> feq{};
    for (int i = 0; i < VelocitySet::q; ++i) {
        const double cu = (VelocitySet::cx[i] * ux + VelocitySet::cy[i] * uy) * inv_cs2;
        feq[i] = VelocitySet::w[i] * rho * (1.0 + cu + 0.5 * cu * cu - usq);
    }
    return feq;
}

void site_moments(const double* f, double& rho, double& ux, double& uy) {
    rho = 0.0;
    double px = 0.0, py = 0.0;
    for (int i = 0; i < VelocitySet::q; ++i) {
        rho += f[i];
        px += VelocitySet::cx[i] * f[i];
        py += VelocitySet::cy[i] * f[i];
    }
    ux = px / rho;
    uy = py / rho;
}

MacroFields macro_fields(const DistributionField& field) {
    MacroFields m;
    m.nx = field.nx;
    m.ny = field.ny;
    const std::size_t n = static_cast<std::size_t>(field.nx) * field.ny;
    m.rho.resize(n);
    m.ux.resize(n);
    m.uy.resize(n);
    for (int x = 0; x < field.nx; ++x)
        for (int y = 0; y < field.ny; ++y) {
            double rho = 0.0, px = 0.0, py = 0.0;
            for (int i = 0; i < VelocitySet::q; ++i) {
                const double v = field(i, x, y);
                rho += v;
                px += VelocitySet::cx[i] * v;
                py += VelocitySet::cy[i] * v;
            }
            const std::size_t s = static_cast<std::size_t>(x) * field.ny + y;
            m.rho[s] = rho;
            m.ux[s] = px / rho;
            m.uy[s] = py / rho;
        }
    return m;
}

DistributionField collide(const DistributionField& field, const LatticeConfig& cfg) {
    cfg.validate();
    if (!field.matches(cfg)) throw std::invalid_argument("collide: field does not match config");
    DistributionField out(field.nx, field.ny);
    const double inv_tau = 1.0 / cfg.tau;
    std::array<double, VelocitySet::q> site{};
    for (int x = 0; x < field.nx; ++x)
        for (int y = 0; y < field.ny; ++y) {
            for (int i = 0; i < VelocitySet::q; ++i) site[i] = field(i, x, y);
            double rho, ux, uy;
            site_moments(site.data(), rho, ux, uy);
            if (!(rho > 0.0)) throw BlowUpError(x, y, rho);
            const auto feq = equilibrium(rho, ux, uy);
            for (int i = 0; i < VelocitySet::q; ++i)
                out(i, x, y) = site[i] - (site[i] - feq[i]) * inv_tau;
        }
    return out;
}

DistributionField stream(const DistributionField& field, const LatticeConfig& cfg) {
    cfg.validate();
    if (!field.matches(cfg)) throw std::invalid_argument("stream: field does not match config");
    DistributionField out(field.nx, field.ny);
    for (int i = 0; i < VelocitySet::q; ++i) {
        const int cx = VelocitySet::cx[i], cy = VelocitySet::cy[i];
        for (int x = 0; x < field.nx; ++x) {
            const int xd = (x + cx + field.nx) % field.nx;
            for (int y = 0; y < field.ny; ++y) {
                const int yd = (y + cy + field.ny) % field.ny;
                out(i, xd, yd) = field(i, x, y);
            }
        }
    }
    return out;
}

DistributionField lbm_step(const DistributionField& field, const LatticeConfig& cfg) {
    return stream(collide(field, cfg), cfg);
}

DistributionField init_kolmogorov(const LatticeConfig& cfg, double u0, int n_modes,
                                  std::string* warning) {
    cfg.validate();
    if (n_modes < 1) throw std::domain_error("init_kolmogorov: n_modes must be positive");
    const double ma = mach_number(std::abs(u0));
    if (ma > 0.3) {
        std::string msg = "init_kolmogorov: Mach " + std::to_string(ma) +
                          " exceeds 0.3; low-Mach validity is not guaranteed";
        if (warning) *warning = msg;
        std::cerr << "[carlbm] warning: " << msg << "\n";
    } else if (warning) {
        warning->clear();
    }
    DistributionField field(cfg.nx, cfg.ny);
    for (int y = 0; y < cfg.ny; ++y) {
        const double ux = u0 * std::sin(2.0 * std::numbers::pi * n_modes * y / cfg.ny);
        const auto feq = equilibrium(1.0, ux, 0.0);
        for (int x = 0; x < cfg.nx; ++x)
            for (int i = 0; i < VelocitySet::q; ++i) field(i, x, y) = feq[i];
    }
    return field;
}

double total_mass(const DistributionField& field) {
    Kahan acc;
    for (double v : field.f) acc.add(v);
    return acc.value();
}

std::array<double, 2> total_momentum(const DistributionField& field) {
    Kahan px, py;
    for (int i = 0; i < VelocitySet::q; ++i) {
        if (VelocitySet::cx[i] == 0 && VelocitySet::cy[i] == 0) continue;
        for (int x = 0; x < field.nx; ++x)
            for (int y = 0; y < field.ny; ++y) {
                const double v = field(i, x, y);
                if (VelocitySet::cx[i] != 0) px.add(VelocitySet::cx[i] * v);
                if (VelocitySet::cy[i] != 0) py.add(VelocitySet::cy[i] * v);
            }
    }
    return {px.value(), py.value()};
}

double kinetic_energy(const DistributionField& field) {
    Kahan acc;
    for (int x = 0; x < field.nx; ++x)
        for (int y = 0; y < field.ny; ++y) {
            double rho = 0.0, px = 0.0, py = 0.0;
            for (int i = 0; i < VelocitySet::q; ++i) {
                const double v = field(i, x, y);
                rho += v;
                px += VelocitySet::cx[i] * v;
                py += VelocitySet::cy[i] * v;
            }
            acc.add(0.5 * (px * px + py * py) / rho);
        }
    return acc.value();
}

}  // namespace carlbm::lattice
