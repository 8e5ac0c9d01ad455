#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "carlbm/lattice.hpp"

namespace carlbm::carleman {

/// Per-site collision map f' = A f + B(f,f) obtained from the BGK rule by
/// expanding the equilibrium around unit density (1/rho -> 1). The model
/// error of that replacement is O(|rho-1| Ma^2); see expansion_error_bound.
struct CollisionTensors {
    double tau = 1.0;
    // A[i*9+j], B[(i*9+j)*9+k]; B symmetric in (j,k).
    std::array<double, 81> A{};
    std::array<double, 729> B{};

    double a(int i, int j) const { return A[i * 9 + j]; }
    double b(int i, int j, int k) const { return B[(i * 9 + j) * 9 + k]; }
};

CollisionTensors collision_tensors(const lattice::LatticeConfig& cfg);

/// Per-sample bound on |(A f + B(f,f)) - collide(f)| from the 1/rho -> 1
/// replacement, evaluated at one site's populations.
double expansion_error_bound(const CollisionTensors& t, const std::array<double, 9>& f);

/// Reference collision that applies the (A, B) polynomial map exactly at
/// every site (the collision the truncated system linearizes).
lattice::DistributionField quadratic_collide(const lattice::DistributionField& field,
                                             const CollisionTensors& t);

/// Truncation order and bilocal separation window.
struct CarlemanConfig {
    int order = 2;   // 1 or 2
    int window = 4;  // max |dx|,|dy| of stored pair separations
    // Debug mode: retain the third- and fourth-order collision products
    // (A x B, B x A, B x B) by evaluating them from F1. Exact for lifted
    // states; used by the full-representation checks.
    bool exact_third_order = false;
    // Per-step leaked-entry fraction above which a warning is emitted.
    double leak_warn_fraction = 0.2;

    void validate() const;
};

/// Truncated Carleman state: first-order block F1 (the populations) and
/// the windowed bilocal block F2_{ij}(x, d) ~ f_i(x) f_j(x+d).
///
/// Separations are stored as canonical minimal images per axis; the per-axis
/// index range is [lo, hi] with lo = -min(w, floor(n/2)),
/// hi = min(w, n-1-floor(n/2)). F2 layout: (((x*ny+y)*ndx+a)*ndy+b)*81 + i*9+j.
struct CarlemanState {
    lattice::DistributionField F1;
    std::vector<double> F2;
    int dx_lo = 0, dx_hi = -1;
    int dy_lo = 0, dy_hi = -1;
    // Cumulative window-leakage accounting for the run.
    std::uint64_t streamed_entries = 0;
    std::uint64_t leaked_entries = 0;
    bool leak_warned = false;

    int ndx() const { return dx_hi - dx_lo + 1; }
    int ndy() const { return dy_hi - dy_lo + 1; }
    std::size_t pair_block(int x, int y, int a, int b) const {
        return ((((static_cast<std::size_t>(x) * F1.ny + y) * ndx() + a) * ndy() + b)) * 81;
    }
    double leaked_fraction() const {
        return streamed_entries ? static_cast<double>(leaked_entries) / streamed_entries : 0.0;
    }
};

/// Whole-grid window for a given grid: every canonical separation is
/// representable, so streaming never leaks.
int full_window(const lattice::LatticeConfig& cfg);

/// Lift a distribution field: F1 copies f, F2_{ij}(x,d) = f_i(x) f_j(x+d)
/// for every windowed separation d.
CarlemanState lift(const lattice::DistributionField& field, const CarlemanConfig& ccfg);

/// One step of the truncated linear system: collision
///   F1' = A F1 + B . F2(d=0),  F2' = (A x A) F2
/// (third-order products dropped unless ccfg.exact_third_order), then
/// streaming (F1 shifts by c_i; F2 shifts base by c_i and separation by
/// c_j - c_i). Separations leaving the window are dropped and counted;
/// entries entering it are closed with the factorized product of the
/// updated F1.
CarlemanState carleman_step(const CarlemanState& state, const CollisionTensors& tensors,
                            const lattice::LatticeConfig& cfg, const CarlemanConfig& ccfg);

/// First Carleman block as a plain distribution field.
lattice::DistributionField project(const CarlemanState& state);

/// Relative L2 deviation of velocity fields: ||u_a - u_b|| / ||u_b||.
/// Throws std::domain_error when ||u_b|| = 0.
double deviation_epsilon(const lattice::DistributionField& a,
                         const lattice::DistributionField& b);

/// Deviation after a single truncated step from a lifted state, measured
/// against the reference LB step. The reference solver first advances
/// pre_steps from the Kolmogorov init so the state carries the density
/// perturbations that expose the truncation residual.
double one_step_epsilon(const lattice::LatticeConfig& cfg, double u0, int n_modes,
                        const CarlemanConfig& ccfg, int pre_steps = 4);

struct SweepSetup {
    int nx = 32;
    int ny = 32;
    double u0 = 0.05;
    int n_modes = 1;
    int steps = 500;
};

struct SweepOptions {
    // Replace the reference solver's collision by the same (A,B) polynomial
    // map; used by the full-representation exactness checks.
    bool quadratic_reference = false;
    int threads = 1;
};

struct SweepRow {
    double re = 0.0;
    double tau = 0.0;
    int steps_done = 0;
    double mean_epsilon = 0.0;
    double max_epsilon = 0.0;
    double leakage = 0.0;
    bool flagged = false;
};

/// Side-by-side LB / truncated-Carleman runs over a Reynolds list. Re is
/// varied through tau at fixed u0 and grid. Blow-up of either solver flags
/// the row instead of aborting. When series is non-null, the per-step
/// epsilon trace of each row is appended to it.
std::vector<SweepRow> reynolds_sweep(const std::vector<double>& re_list, const SweepSetup& setup,
                                     const CarlemanConfig& ccfg, const SweepOptions& opts = {},
                                     std::vector<std::vector<double>>* series = nullptr);

}  // namespace carlbm::carleman
