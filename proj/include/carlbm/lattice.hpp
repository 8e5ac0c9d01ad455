#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace carlbm::lattice {

/// D2Q9 velocity set: nine discrete velocities on a square lattice.
/// Index order: rest, axis-aligned (+x, +y, -x, -y), diagonals
/// ((1,1), (-1,1), (-1,-1), (1,-1)).
struct VelocitySet {
    static constexpr int q = 9;
    static constexpr std::array<int, q> cx{0, 1, 0, -1, 0, 1, -1, -1, 1};
    static constexpr std::array<int, q> cy{0, 0, 1, 0, -1, 1, 1, -1, -1};
    static constexpr std::array<double, q> w{
        4.0 / 9.0,  1.0 / 9.0,  1.0 / 9.0,  1.0 / 9.0,  1.0 / 9.0,
        1.0 / 36.0, 1.0 / 36.0, 1.0 / 36.0, 1.0 / 36.0};
    static constexpr double cs2 = 1.0 / 3.0;
};

/// Grid size and BGK relaxation time. Boundaries are periodic in both
/// directions.
struct LatticeConfig {
    int nx = 0;
    int ny = 0;
    double tau = 1.0;

    void validate() const;
    /// Kinematic viscosity nu = cs^2 (tau - 1/2) in lattice units.
    double viscosity() const { return VelocitySet::cs2 * (tau - 0.5); }
};

/// Reynolds number convention used throughout: Re = u0 * ny / nu.
double reynolds_number(const LatticeConfig& cfg, double u0);

/// Relaxation time that realizes a target Reynolds number at fixed u0 and
/// grid height.
double tau_for_reynolds(double re, double u0, int ny);

double mach_number(double u);

/// The nine populations f_i(x, y) on a periodic grid, stored with index
/// (i, x, y), y fastest.
struct DistributionField {
    int nx = 0;
    int ny = 0;
    std::vector<double> f;

    DistributionField() = default;
    DistributionField(int nx_, int ny_)
        : nx(nx_), ny(ny_), f(static_cast<std::size_t>(VelocitySet::q) * nx_ * ny_, 0.0) {}

    double& operator()(int i, int x, int y) {
        return f[(static_cast<std::size_t>(i) * nx + x) * ny + y];
    }
    double operator()(int i, int x, int y) const {
        return f[(static_cast<std::size_t>(i) * nx + x) * ny + y];
    }
    std::size_t size() const { return f.size(); }
    bool matches(const LatticeConfig& cfg) const { return nx == cfg.nx && ny == cfg.ny; }
};

/// Density and velocity moments, index x*ny + y.
struct MacroFields {
    int nx = 0;
    int ny = 0;
    std::vector<double> rho;
    std::vector<double> ux;
    std::vector<double> uy;
};

/// Raised when a site density goes non-positive during collision.
struct BlowUpError : std::runtime_error {
    int x;
    int y;
    BlowUpError(int x_, int y_, double rho);
};

/// Second-order D2Q9 equilibrium
///   f_eq_i = w_i rho [1 + c.u/cs2 + (c.u)^2/(2 cs4) - u^2/(2 cs2)].
/// Throws std::domain_error for rho <= 0.
std::array<double, VelocitySet::q> equilibrium(double rho, double ux, double uy);

/// Density and velocity moments of one site's populations.
void site_moments(const double* f, double& rho, double& ux, double& uy);

MacroFields macro_fields(const DistributionField& field);

/// BGK collision f_i <- f_i - (f_i - f_eq)/tau at every site. Pure:
/// returns a new field. Throws BlowUpError if any site density <= 0.
DistributionField collide(const DistributionField& field, const LatticeConfig& cfg);

/// Periodic streaming: f_i(x + c_i) <- f_i(x). A pure permutation of the
/// stored values.
DistributionField stream(const DistributionField& field, const LatticeConfig& cfg);

/// One LB time step: collide then stream.
DistributionField lbm_step(const DistributionField& field, const LatticeConfig& cfg);

/// Decaying sinusoidal shear ("Kolmogorov-like") initial condition:
/// rho = 1, ux = u0 sin(2 pi n_modes y / ny), uy = 0, populations at
/// equilibrium. If u0/cs exceeds 0.3 a warning is emitted (and stored in
/// *warning when non-null).
DistributionField init_kolmogorov(const LatticeConfig& cfg, double u0, int n_modes,
                                  std::string* warning = nullptr);

/// Compensated (Neumaier) sum of all populations.
double total_mass(const DistributionField& field);

/// Global momentum (sum over sites of sum_i c_i f_i), compensated.
std::array<double, 2> total_momentum(const DistributionField& field);

/// Kinetic energy 0.5 sum_sites rho u^2.
double kinetic_energy(const DistributionField& field);

}  // namespace carlbm::lattice
