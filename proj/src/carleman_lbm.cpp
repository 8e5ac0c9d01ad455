#include "carlbm/carleman_lbm.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <iostream>
#include <limits>
#include <stdexcept>

namespace carlbm::carleman {

using lattice::DistributionField;
using lattice::LatticeConfig;
using lattice::VelocitySet;

namespace {

constexpr int Q = VelocitySet::q;

int floordiv2(int n) { return n / 2; }

// Minimal-image representative of a separation on a periodic axis of
// length n: result lies in [-floor(n/2), n-1-floor(n/2)].
int canon(int v, int n) {
    int r = ((v % n) + n) % n;
    if (r > n - 1 - floordiv2(n)) r -= n;
    return r;
}

struct AxisWindow {
    int lo, hi;
    int size() const { return hi - lo + 1; }
};

AxisWindow axis_window(int n, int w) {
    return {-std::min(w, floordiv2(n)), std::min(w, n - 1 - floordiv2(n))};
}

// Per-site quadratic collision using the tensors.
void apply_site_tensors(const CollisionTensors& t, const double* f, double* linear,
                        double* quadratic) {
    for (int i = 0; i < Q; ++i) {
        double a = 0.0;
        for (int j = 0; j < Q; ++j) a += t.A[i * 9 + j] * f[j];
        linear[i] = a;
    }
    if (!quadratic) return;
    for (int i = 0; i < Q; ++i) {
        double s = 0.0;
        for (int j = 0; j < Q; ++j) {
            const double fj = f[j];
            if (fj == 0.0) continue;
            const double* brow = &t.B[(i * 9 + j) * 9];
            double inner = 0.0;
            for (int k = 0; k < Q; ++k) inner += brow[k] * f[k];
            s += fj * inner;
        }
        quadratic[i] = s;
    }
}

// out = A M A^T for one 9x9 pair block.
void pair_collision(const std::array<double, 81>& A, const double* M, double* out) {
    double T[81];
    for (int i = 0; i < Q; ++i)
        for (int l = 0; l < Q; ++l) {
            double acc = 0.0;
            for (int j = 0; j < Q; ++j) acc += A[i * 9 + j] * M[j * 9 + l];
            T[i * 9 + l] = acc;
        }
    for (int i = 0; i < Q; ++i)
        for (int j = 0; j < Q; ++j) {
            double acc = 0.0;
            for (int l = 0; l < Q; ++l) acc += T[i * 9 + l] * A[j * 9 + l];
            out[i * 9 + j] = acc;
        }
}

}  // namespace

CollisionTensors collision_tensors(const LatticeConfig& cfg) {
    cfg.validate();
    CollisionTensors t;
    t.tau = cfg.tau;
    const double inv_tau = 1.0 / cfg.tau;
    constexpr double cs2 = VelocitySet::cs2;
    for (int i = 0; i < Q; ++i) {
        for (int j = 0; j < Q; ++j) {
            const double cij = VelocitySet::cx[i] * VelocitySet::cx[j] +
                               VelocitySet::cy[i] * VelocitySet::cy[j];
            double a = inv_tau * VelocitySet::w[i] * (1.0 + cij / cs2);
            if (i == j) a += 1.0 - inv_tau;
            t.A[i * 9 + j] = a;
            for (int k = 0; k < Q; ++k) {
                const double cik = VelocitySet::cx[i] * VelocitySet::cx[k] +
                                   VelocitySet::cy[i] * VelocitySet::cy[k];
                const double cjk = VelocitySet::cx[j] * VelocitySet::cx[k] +
                                   VelocitySet::cy[j] * VelocitySet::cy[k];
                t.B[(i * 9 + j) * 9 + k] =
                    inv_tau * VelocitySet::w[i] *
                    (cij * cik / (2.0 * cs2 * cs2) - cjk / (2.0 * cs2));
            }
        }
    }
    return t;
}

double expansion_error_bound(const CollisionTensors& t, const std::array<double, 9>& f) {
    double rho = 0.0, px = 0.0, py = 0.0;
    for (int i = 0; i < Q; ++i) {
        rho += f[i];
        px += VelocitySet::cx[i] * f[i];
        py += VelocitySet::cy[i] * f[i];
    }
    if (!(rho > 0.0)) throw std::domain_error("expansion_error_bound: rho must be positive");
    constexpr double cs2 = VelocitySet::cs2;
    const double factor = std::abs(1.0 / rho - 1.0) / t.tau;
    double bound = 0.0;
    for (int i = 0; i < Q; ++i) {
        const double cp = VelocitySet::cx[i] * px + VelocitySet::cy[i] * py;
        const double quad = VelocitySet::w[i] *
                            (cp * cp / (2.0 * cs2 * cs2) - (px * px + py * py) / (2.0 * cs2));
        bound = std::max(bound, factor * std::abs(quad));
    }
    return bound;
}

DistributionField quadratic_collide(const DistributionField& field, const CollisionTensors& t) {
    DistributionField out(field.nx, field.ny);
    double site[Q], lin[Q], quad[Q];
    for (int x = 0; x < field.nx; ++x)
        for (int y = 0; y < field.ny; ++y) {
            for (int i = 0; i < Q; ++i) site[i] = field(i, x, y);
            apply_site_tensors(t, site, lin, quad);
            for (int i = 0; i < Q; ++i) out(i, x, y) = lin[i] + quad[i];
        }
    return out;
}

void CarlemanConfig::validate() const {
    if (order != 1 && order != 2)
        throw std::domain_error("CarlemanConfig: order must be 1 or 2, got " +
                                std::to_string(order));
    if (window < 0) throw std::domain_error("CarlemanConfig: window must be non-negative");
}

int full_window(const LatticeConfig& cfg) { return std::max(cfg.nx, cfg.ny) / 2; }

CarlemanState lift(const DistributionField& field, const CarlemanConfig& ccfg) {
    ccfg.validate();
    CarlemanState st;
    st.F1 = field;
    if (ccfg.order < 2) return st;
    const int nx = field.nx, ny = field.ny;
    const AxisWindow wx = axis_window(nx, ccfg.window);
    const AxisWindow wy = axis_window(ny, ccfg.window);
    st.dx_lo = wx.lo;
    st.dx_hi = wx.hi;
    st.dy_lo = wy.lo;
    st.dy_hi = wy.hi;
    st.F2.assign(static_cast<std::size_t>(nx) * ny * wx.size() * wy.size() * 81, 0.0);
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y)
            for (int a = 0; a < wx.size(); ++a) {
                const int xo = (x + wx.lo + a + nx) % nx;
                for (int b = 0; b < wy.size(); ++b) {
                    const int yo = (y + wy.lo + b + ny) % ny;
                    double* blk = st.F2.data() + st.pair_block(x, y, a, b);
                    for (int i = 0; i < Q; ++i) {
                        const double fi = field(i, x, y);
                        for (int j = 0; j < Q; ++j) blk[i * 9 + j] = fi * field(j, xo, yo);
                    }
                }
            }
    return st;
}

CarlemanState carleman_step(const CarlemanState& state, const CollisionTensors& tensors,
                            const LatticeConfig& cfg, const CarlemanConfig& ccfg) {
    cfg.validate();
    ccfg.validate();
    if (!state.F1.matches(cfg))
        throw std::invalid_argument("carleman_step: state does not match config");
    const int nx = cfg.nx, ny = cfg.ny;

    CarlemanState next;
    next.dx_lo = state.dx_lo;
    next.dx_hi = state.dx_hi;
    next.dy_lo = state.dy_lo;
    next.dy_hi = state.dy_hi;
    next.streamed_entries = state.streamed_entries;
    next.leaked_entries = state.leaked_entries;
    next.leak_warned = state.leak_warned;

    const int ndx = state.ndx(), ndy = state.ndy();
    const bool with_f2 = ccfg.order >= 2;
    if (with_f2 && state.F2.size() != static_cast<std::size_t>(nx) * ny * ndx * ndy * 81)
        throw std::invalid_argument("carleman_step: F2 size does not match window");

    // --- collision on F1 (and per-site linear/quadratic parts for debug) ---
    const std::size_t nsites = static_cast<std::size_t>(nx) * ny;
    std::vector<double> lin(nsites * Q), quad;
    if (ccfg.exact_third_order) quad.resize(nsites * Q);
    DistributionField f1c(nx, ny);  // post-collision first block
    {
        double site[Q], l[Q], s[Q];
        // zero-separation index, used for the B . F2(d=0) contraction
        const int a0 = -state.dx_lo, b0 = -state.dy_lo;
        for (int x = 0; x < nx; ++x)
            for (int y = 0; y < ny; ++y) {
                for (int i = 0; i < Q; ++i) site[i] = state.F1(i, x, y);
                apply_site_tensors(tensors, site, l, ccfg.exact_third_order ? s : nullptr);
                const std::size_t sidx = (static_cast<std::size_t>(x) * ny + y) * Q;
                for (int i = 0; i < Q; ++i) lin[sidx + i] = l[i];
                if (ccfg.exact_third_order)
                    for (int i = 0; i < Q; ++i) quad[sidx + i] = s[i];
                if (with_f2) {
                    const double* m0 = state.F2.data() + state.pair_block(x, y, a0, b0);
                    for (int i = 0; i < Q; ++i) {
                        double acc = l[i];
                        const double* bi = &tensors.B[i * 81];
                        for (int jk = 0; jk < 81; ++jk) acc += bi[jk] * m0[jk];
                        f1c(i, x, y) = acc;
                    }
                } else {
                    for (int i = 0; i < Q; ++i) f1c(i, x, y) = l[i];
                }
            }
    }

    // --- collision on F2: (A x A) F2, plus retained products in debug mode ---
    std::vector<double> f2c;
    if (with_f2) {
        f2c.resize(state.F2.size());
        for (int x = 0; x < nx; ++x)
            for (int y = 0; y < ny; ++y)
                for (int a = 0; a < ndx; ++a) {
                    const int xo = (x + state.dx_lo + a + nx) % nx;
                    for (int b = 0; b < ndy; ++b) {
                        const std::size_t blk = state.pair_block(x, y, a, b);
                        pair_collision(tensors.A, state.F2.data() + blk, f2c.data() + blk);
                        if (ccfg.exact_third_order) {
                            const int yo = (y + state.dy_lo + b + ny) % ny;
                            const std::size_t sl = (static_cast<std::size_t>(x) * ny + y) * Q;
                            const std::size_t so = (static_cast<std::size_t>(xo) * ny + yo) * Q;
                            double* out = f2c.data() + blk;
                            for (int i = 0; i < Q; ++i)
                                for (int j = 0; j < Q; ++j)
                                    out[i * 9 + j] += lin[sl + i] * quad[so + j] +
                                                      quad[sl + i] * lin[so + j] +
                                                      quad[sl + i] * quad[so + j];
                        }
                    }
                }
    }

    // --- streaming: F1 push by c_i ---
    next.F1 = DistributionField(nx, ny);
    for (int i = 0; i < Q; ++i) {
        const int cx = VelocitySet::cx[i], cy = VelocitySet::cy[i];
        for (int x = 0; x < nx; ++x) {
            const int xd = (x + cx + nx) % nx;
            for (int y = 0; y < ny; ++y) next.F1(i, xd, (y + cy + ny) % ny) = f1c(i, x, y);
        }
    }

    if (!with_f2) return next;

    // --- streaming: F2 gather. For slot (i,j) the base shifts by c_i and
    // the separation by c_j - c_i; dest entries whose source separation
    // lies outside the window take the factorized closure from the updated
    // F1, and the matching outflow is charged to the leakage counter. ---
    next.F2.assign(state.F2.size(), 0.0);
    // Per-axis source maps indexed by shift+2 (shifts lie in [-2,2]).
    std::vector<std::vector<int>> map_x(5, std::vector<int>(ndx));
    std::vector<std::vector<int>> map_y(5, std::vector<int>(ndy));
    int kept_x[5], kept_y[5];
    for (int s = -2; s <= 2; ++s) {
        kept_x[s + 2] = 0;
        for (int a = 0; a < ndx; ++a) {
            const int src = canon(state.dx_lo + a - s, nx) - state.dx_lo;
            map_x[s + 2][a] = (src >= 0 && src < ndx) ? src : -1;
            kept_x[s + 2] += map_x[s + 2][a] >= 0;
        }
        kept_y[s + 2] = 0;
        for (int b = 0; b < ndy; ++b) {
            const int src = canon(state.dy_lo + b - s, ny) - state.dy_lo;
            map_y[s + 2][b] = (src >= 0 && src < ndy) ? src : -1;
            kept_y[s + 2] += map_y[s + 2][b] >= 0;
        }
    }

    std::uint64_t step_total = 0, step_leaked = 0;
    for (int i = 0; i < Q; ++i) {
        const int cxi = VelocitySet::cx[i], cyi = VelocitySet::cy[i];
        for (int j = 0; j < Q; ++j) {
            const int ddx = VelocitySet::cx[j] - cxi + 2;
            const int ddy = VelocitySet::cy[j] - cyi + 2;
            const int* mx = map_x[ddx].data();
            const int* my = map_y[ddy].data();
            step_total += nsites * static_cast<std::uint64_t>(ndx) * ndy;
            step_leaked += nsites * (static_cast<std::uint64_t>(ndx) * ndy -
                                     static_cast<std::uint64_t>(kept_x[ddx]) * kept_y[ddy]);
            for (int xd = 0; xd < nx; ++xd) {
                const int xs = (xd - cxi + nx) % nx;
                for (int yd = 0; yd < ny; ++yd) {
                    const int ys = (yd - cyi + ny) % ny;
                    for (int a = 0; a < ndx; ++a) {
                        const int sa = mx[a];
                        for (int b = 0; b < ndy; ++b) {
                            const int sb = my[b];
                            double v;
                            if (sa >= 0 && sb >= 0) {
                                v = f2c[state.pair_block(xs, ys, sa, sb) + i * 9 + j];
                            } else {
                                const int xo = (xd + state.dx_lo + a + nx) % nx;
                                const int yo = (yd + state.dy_lo + b + ny) % ny;
                                v = next.F1(i, xd, yd) * next.F1(j, xo, yo);
                            }
                            next.F2[next.pair_block(xd, yd, a, b) + i * 9 + j] = v;
                        }
                    }
                }
            }
        }
    }
    next.streamed_entries += step_total;
    next.leaked_entries += step_leaked;
    const double frac = step_total ? static_cast<double>(step_leaked) / step_total : 0.0;
    if (frac > ccfg.leak_warn_fraction && !next.leak_warned) {
        std::cerr << "[carlbm] warning: window leakage fraction " << frac
                  << " exceeds configured threshold " << ccfg.leak_warn_fraction << "\n";
        next.leak_warned = true;
    }
    return next;
}

DistributionField project(const CarlemanState& state) { return state.F1; }

double deviation_epsilon(const DistributionField& a, const DistributionField& b) {
    if (a.nx != b.nx || a.ny != b.ny)
        throw std::invalid_argument("deviation_epsilon: field dimensions differ");
    const auto ma = lattice::macro_fields(a);
    const auto mb = lattice::macro_fields(b);
    double num = 0.0, den = 0.0;
    for (std::size_t s = 0; s < ma.rho.size(); ++s) {
        const double dux = ma.ux[s] - mb.ux[s];
        const double duy = ma.uy[s] - mb.uy[s];
        num += dux * dux + duy * duy;
        den += mb.ux[s] * mb.ux[s] + mb.uy[s] * mb.uy[s];
    }
    if (den == 0.0)
        throw std::domain_error("deviation_epsilon: reference velocity field is zero");
    return std::sqrt(num / den);
}

double one_step_epsilon(const LatticeConfig& cfg, double u0, int n_modes,
                        const CarlemanConfig& ccfg, int pre_steps) {
    std::string warn;
    DistributionField f = lattice::init_kolmogorov(cfg, u0, n_modes, &warn);
    for (int t = 0; t < pre_steps; ++t) f = lattice::lbm_step(f, cfg);
    const CollisionTensors tensors = collision_tensors(cfg);
    CarlemanState st = lift(f, ccfg);
    st = carleman_step(st, tensors, cfg, ccfg);
    const DistributionField ref = lattice::lbm_step(f, cfg);
    return deviation_epsilon(project(st), ref);
}

namespace {

SweepRow run_sweep_row(double re, const SweepSetup& setup, const CarlemanConfig& ccfg,
                       const SweepOptions& opts, std::vector<double>* eps_series) {
    SweepRow row;
    row.re = re;
    row.tau = lattice::tau_for_reynolds(re, setup.u0, setup.ny);
    LatticeConfig cfg{setup.nx, setup.ny, row.tau};
    std::string warn;
    DistributionField ref = lattice::init_kolmogorov(cfg, setup.u0, setup.n_modes, &warn);
    const CollisionTensors tensors = collision_tensors(cfg);
    CarlemanState st = lift(ref, ccfg);

    double eps_sum = 0.0;
    int eps_count = 0;
    try {
        for (int t = 1; t <= setup.steps; ++t) {
            ref = opts.quadratic_reference ? lattice::stream(quadratic_collide(ref, tensors), cfg)
                                           : lattice::lbm_step(ref, cfg);
            st = carleman_step(st, tensors, cfg, ccfg);
            const double eps = deviation_epsilon(project(st), ref);
            if (!std::isfinite(eps) || eps > 1e6) {
                row.flagged = true;
                row.steps_done = t;
                break;
            }
            if (eps_series) eps_series->push_back(eps);
            row.max_epsilon = std::max(row.max_epsilon, eps);
            if (t > 1 || setup.steps == 1) {
                eps_sum += eps;
                ++eps_count;
            }
            row.steps_done = t;
        }
    } catch (const lattice::BlowUpError&) {
        row.flagged = true;
    } catch (const std::domain_error&) {
        row.flagged = true;
    }
    if (row.flagged) {
        row.mean_epsilon = std::numeric_limits<double>::quiet_NaN();
        row.max_epsilon = std::numeric_limits<double>::quiet_NaN();
    } else if (eps_count > 0) {
        row.mean_epsilon = eps_sum / eps_count;
    }
    row.leakage = st.leaked_fraction();
    return row;
}

}  // namespace

std::vector<SweepRow> reynolds_sweep(const std::vector<double>& re_list, const SweepSetup& setup,
                                     const CarlemanConfig& ccfg, const SweepOptions& opts,
                                     std::vector<std::vector<double>>* series) {
    std::vector<SweepRow> rows(re_list.size());
    std::vector<std::vector<double>> traces(re_list.size());
    const int threads = std::max(1, opts.threads);
    if (threads == 1) {
        for (std::size_t r = 0; r < re_list.size(); ++r)
            rows[r] = run_sweep_row(re_list[r], setup, ccfg, opts, series ? &traces[r] : nullptr);
    } else {
        for (std::size_t base = 0; base < re_list.size(); base += threads) {
            const std::size_t end = std::min(base + threads, re_list.size());
            std::vector<std::future<SweepRow>> batch;
            for (std::size_t r = base; r < end; ++r)
                batch.push_back(std::async(std::launch::async, run_sweep_row, re_list[r], setup,
                                           ccfg, opts, series ? &traces[r] : nullptr));
            for (std::size_t r = base; r < end; ++r) rows[r] = batch[r - base].get();
        }
    }
    if (series)
        for (auto& tr : traces) series->push_back(std::move(tr));
    return rows;
}

}  // namespace carlbm::carleman
