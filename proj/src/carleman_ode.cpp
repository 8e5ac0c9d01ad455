#include "carlbm/carleman_ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace carlbm::ode {

void QuadraticSystem::validate() const {
    if (n < 1) throw std::domain_error("QuadraticSystem: dimension must be positive");
    if (L.rows() != n || L.cols() != n)
        throw std::invalid_argument("QuadraticSystem: L must be n x n");
    if (Q.rows() != n || Q.cols() != static_cast<Eigen::Index>(n) * n)
        throw std::invalid_argument("QuadraticSystem: Q must be n x n^2");
    // Q must be symmetric in its last two indices.
    for (int r = 0; r < Q.outerSize(); ++r)
        for (SparseMat::InnerIterator it(Q, r); it; ++it) {
            const int m = static_cast<int>(it.col()) / n;
            const int k = static_cast<int>(it.col()) % n;
            if (std::abs(Q.coeff(r, static_cast<Eigen::Index>(k) * n + m) - it.value()) > 1e-14)
                throw std::invalid_argument("QuadraticSystem: Q not symmetric in last two indices");
        }
}

int QuadraticSystem::kappa() const {
    int best = 0;
    for (int r = 0; r < Q.outerSize(); ++r) {
        int cnt = 0;
        for (SparseMat::InnerIterator it(Q, r); it; ++it) ++cnt;
        best = std::max(best, cnt);
    }
    return best;
}

Eigen::VectorXd QuadraticSystem::rhs(const Eigen::VectorXd& y) const {
    Eigen::VectorXd out = L * y;
    for (int r = 0; r < Q.outerSize(); ++r) {
        double acc = 0.0;
        for (SparseMat::InnerIterator it(Q, r); it; ++it) {
            const int m = static_cast<int>(it.col()) / n;
            const int k = static_cast<int>(it.col()) % n;
            acc += it.value() * y[m] * y[k];
        }
        out[r] += scale * acc;
    }
    return out;
}

SizingError::SizingError(std::uint64_t bytes)
    : std::runtime_error("Carleman build exceeds memory budget: requires about " +
                         std::to_string(bytes) + " bytes"),
      required_bytes(bytes) {}

BlowUpError::BlowUpError(int step_)
    : std::runtime_error("euler_march: trajectory blew up at step " + std::to_string(step_)),
      step(step_) {}

std::uint64_t CarlemanMatrix::level_size(int m) const {
    std::uint64_t s = 1;
    for (int p = 0; p < m; ++p) s *= static_cast<std::uint64_t>(n);
    return s;
}

std::uint64_t CarlemanMatrix::total_variables() const {
    std::uint64_t total = 0;
    for (int m = 1; m <= order; ++m) total += level_size(m);
    return total;
}

namespace {

std::uint64_t ipow(std::uint64_t base, int e) {
    std::uint64_t r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

// Kronecker-sum placement: sum over slots p of I^(p-1) (x) OP (x) I^(m-p),
// where OP maps one y factor to `arity` factors (arity 1 for L, 2 for Q).
SparseMat kronecker_slot_sum(const SparseMat& op, int n, int m, int op_arity, double coeff) {
    const std::uint64_t rows = ipow(n, m);
    const std::uint64_t cols = ipow(n, m - 1 + op_arity);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(op.nonZeros()) * m * ipow(n, m - 1));

    for (int p = 1; p <= m; ++p) {
        const std::uint64_t left = ipow(n, p - 1);        // index block before the slot
        const std::uint64_t right_r = ipow(n, m - p);     // rows after the slot
        const std::uint64_t right_c = right_r;            // same trailing factors on columns
        const std::uint64_t slot_cols = ipow(n, op_arity);
        for (int r = 0; r < op.outerSize(); ++r)
            for (SparseMat::InnerIterator it(op, r); it; ++it)
                for (std::uint64_t a = 0; a < left; ++a) {
                    const std::uint64_t row_base = (a * n + r) * right_r;
                    const std::uint64_t col_base = (a * slot_cols + it.col()) * right_c;
                    for (std::uint64_t b = 0; b < right_r; ++b)
                        trips.emplace_back(static_cast<Eigen::Index>(row_base + b),
                                           static_cast<Eigen::Index>(col_base + b),
                                           coeff * it.value());
                }
    }
    SparseMat out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

}  // namespace

CarlemanMatrix build_carleman_matrix(const QuadraticSystem& sys, int order,
                                     std::uint64_t memory_budget_bytes) {
    if (order < 1) throw std::domain_error("build_carleman_matrix: order must be >= 1");
    sys.validate();

    // Sizing: lifted state (two buffers) plus block nonzeros.
    std::uint64_t state_doubles = 0;
    for (int m = 1; m <= order; ++m) state_doubles += ipow(sys.n, m);
    std::uint64_t nnzL = sys.L.nonZeros(), nnzQ = sys.Q.nonZeros();
    std::uint64_t block_nnz = 0;
    for (int m = 1; m <= order; ++m) {
        block_nnz += static_cast<std::uint64_t>(m) * nnzL * ipow(sys.n, m - 1);
        block_nnz += static_cast<std::uint64_t>(m) * nnzQ * ipow(sys.n, m - 1);
    }
    const std::uint64_t required = 2 * state_doubles * 8 + block_nnz * 16;
    if (required > memory_budget_bytes) throw SizingError(required);

    CarlemanMatrix mat;
    mat.n = sys.n;
    mat.order = order;
    for (int m = 1; m <= order; ++m) {
        mat.diag.push_back(kronecker_slot_sum(sys.L, sys.n, m, 1, 1.0));
        mat.up.push_back(kronecker_slot_sum(sys.Q, sys.n, m, 2, sys.scale));
    }
    return mat;
}

std::vector<Eigen::VectorXd> euler_march(const CarlemanMatrix& mat, const Eigen::VectorXd& y0,
                                         double dt, int steps) {
    if (!(dt > 0.0)) throw std::domain_error("euler_march: dt must be positive");
    if (y0.size() != mat.n) throw std::invalid_argument("euler_march: y0 dimension mismatch");
    // CFL-style stability guard on the linear part.
    double l_norm = 0.0;
    for (int r = 0; r < mat.diag[0].outerSize(); ++r) {
        double row = 0.0;
        for (SparseMat::InnerIterator it(mat.diag[0], r); it; ++it) row += std::abs(it.value());
        l_norm = std::max(l_norm, row);
    }
    if (dt * l_norm >= 1.0)
        throw std::domain_error("euler_march: dt violates dt*||L|| < 1 (dt*||L|| = " +
                                std::to_string(dt * l_norm) + ")");

    // Lifted initial state: Kronecker powers of y0.
    std::vector<Eigen::VectorXd> levels(mat.order);
    levels[0] = y0;
    for (int m = 2; m <= mat.order; ++m) {
        const Eigen::VectorXd& prev = levels[m - 2];
        Eigen::VectorXd cur(prev.size() * mat.n);
        for (Eigen::Index a = 0; a < prev.size(); ++a)
            for (int b = 0; b < mat.n; ++b) cur[a * mat.n + b] = prev[a] * y0[b];
        levels[m - 1] = cur;
    }

    const double guard = 1e6 * std::max(y0.norm(), 1e-300);
    std::vector<Eigen::VectorXd> trajectory;
    trajectory.reserve(steps + 1);
    trajectory.push_back(levels[0]);

    std::vector<Eigen::VectorXd> next(mat.order);
    for (int t = 1; t <= steps; ++t) {
        for (int m = 1; m <= mat.order; ++m) {
            next[m - 1] = levels[m - 1] + dt * (mat.diag[m - 1] * levels[m - 1]);
            if (m < mat.order) next[m - 1] += dt * (mat.up[m - 1] * levels[m]);
        }
        levels.swap(next);
        if (!levels[0].allFinite() || levels[0].norm() > guard) throw BlowUpError(t);
        trajectory.push_back(levels[0]);
    }
    return trajectory;
}

QuadraticSystem burgers_system(int n, double nu, double domain_length) {
    if (n < 4) throw std::domain_error("burgers_system: need at least 4 grid points");
    if (!(nu > 0.0)) throw std::domain_error("burgers_system: viscosity must be positive");
    if (!(domain_length > 0.0)) throw std::domain_error("burgers_system: length must be positive");
    const double h = domain_length / n;

    QuadraticSystem sys;
    sys.n = n;
    sys.scale = 1.0;

    std::vector<Eigen::Triplet<double>> lt;
    const double d = nu / (h * h);
    for (int l = 0; l < n; ++l) {
        lt.emplace_back(l, l, -2.0 * d);
        lt.emplace_back(l, (l + 1) % n, d);
        lt.emplace_back(l, (l + n - 1) % n, d);
    }
    sys.L.resize(n, n);
    sys.L.setFromTriplets(lt.begin(), lt.end());

    // -u u_x with a centered difference: Q(u,u)_l = -u_l (u_{l+1} - u_{l-1}) / (2h),
    // split symmetrically over the two argument slots.
    std::vector<Eigen::Triplet<double>> qt;
    const double c = 1.0 / (4.0 * h);
    for (int l = 0; l < n; ++l) {
        const int lp = (l + 1) % n, lm = (l + n - 1) % n;
        qt.emplace_back(l, l * n + lp, -c);
        qt.emplace_back(l, lp * n + l, -c);
        qt.emplace_back(l, l * n + lm, c);
        qt.emplace_back(l, lm * n + l, c);
    }
    sys.Q.resize(n, static_cast<Eigen::Index>(n) * n);
    sys.Q.setFromTriplets(qt.begin(), qt.end());
    return sys;
}

double burgers_reynolds(double u0_max, double domain_length, double nu) {
    return std::abs(u0_max) * domain_length / nu;
}

std::vector<Eigen::VectorXd> integrate_reference(const QuadraticSystem& sys,
                                                 const Eigen::VectorXd& y0, double dt, int steps) {
    sys.validate();
    const double guard = 1e6 * std::max(y0.norm(), 1e-300);
    std::vector<Eigen::VectorXd> traj;
    traj.reserve(steps + 1);
    traj.push_back(y0);
    Eigen::VectorXd y = y0;
    for (int t = 1; t <= steps; ++t) {
        y += dt * sys.rhs(y);
        if (!y.allFinite() || y.norm() > guard) throw BlowUpError(t);
        traj.push_back(y);
    }
    return traj;
}

std::vector<TruncationRow> truncation_error(const QuadraticSystem& sys, const Eigen::VectorXd& y0,
                                            double dt, int steps, const std::vector<int>& k_list,
                                            std::uint64_t memory_budget_bytes) {
    std::vector<Eigen::VectorXd> ref;
    try {
        ref = integrate_reference(sys, y0, dt, steps);
    } catch (const BlowUpError& e) {
        throw std::runtime_error(std::string("truncation_error: reference integration blew up (") +
                                 e.what() + ")");
    }
    const Eigen::VectorXd& yref = ref.back();
    const double ref_norm = yref.norm();
    if (ref_norm == 0.0)
        throw std::runtime_error("truncation_error: reference final state is zero");

    const int kmax = *std::max_element(k_list.begin(), k_list.end());
    const CarlemanMatrix full = build_carleman_matrix(sys, kmax, memory_budget_bytes);

    std::vector<TruncationRow> rows;
    for (int k : k_list) {
        if (k < 1) throw std::domain_error("truncation_error: orders must be >= 1");
        CarlemanMatrix sub;
        sub.n = full.n;
        sub.order = k;
        sub.diag.assign(full.diag.begin(), full.diag.begin() + k);
        sub.up.assign(full.up.begin(), full.up.begin() + k);
        const auto traj = euler_march(sub, y0, dt, steps);
        rows.push_back({k, (traj.back() - yref).norm() / ref_norm});
    }
    return rows;
}

}  // namespace carlbm::ode
