#pragma once

#include <Eigen/Sparse>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace carlbm::ode {

using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Quadratic ODE  dy/dt = L y + scale * Q(y, y)  in n dimensions.
/// Q is stored as an n x n^2 sparse map acting on y (x) y with column
/// index m*n + k, symmetric under (m, k) swap.
struct QuadraticSystem {
    int n = 0;
    SparseMat L;  // n x n
    SparseMat Q;  // n x n^2
    double scale = 1.0;

    void validate() const;
    /// Max nonzeros per row of Q (the sparsity kappa).
    int kappa() const;
    /// L y + scale * Q(y, y).
    Eigen::VectorXd rhs(const Eigen::VectorXd& y) const;
};

struct SizingError : std::runtime_error {
    std::uint64_t required_bytes;
    explicit SizingError(std::uint64_t bytes);
};

struct BlowUpError : std::runtime_error {
    int step;
    explicit BlowUpError(int step_);
};

/// Block upper-bidiagonal Carleman matrix of order k: for each level
/// m = 1..k the diagonal block M_{m,m} (Kronecker sum of L) and the
/// coupling block M_{m,m+1} (Kronecker sum of scale*Q). Level m holds the
/// n^m Kronecker-power variables y^(x m).
struct CarlemanMatrix {
    int n = 0;
    int order = 0;
    std::vector<SparseMat> diag;  // diag[m-1]: n^m x n^m
    std::vector<SparseMat> up;    // up[m-1]:   n^m x n^(m+1)

    std::uint64_t level_size(int m) const;
    std::uint64_t total_variables() const;
};

/// Assemble the Carleman blocks. Throws SizingError when the lifted state
/// (plus block storage) would exceed memory_budget_bytes.
CarlemanMatrix build_carleman_matrix(const QuadraticSystem& sys, int order,
                                     std::uint64_t memory_budget_bytes = 1ull << 32);

/// Forward-Euler march of the truncated lifted system from
/// [y0, y0^(x2), ..., y0^(x k)]; level k sees no level k+1. Returns the
/// first-block trajectory (steps+1 rows). Throws BlowUpError when the
/// first-block norm exceeds 1e6 times its initial value, and
/// std::domain_error when dt*||L||_inf >= 1.
std::vector<Eigen::VectorXd> euler_march(const CarlemanMatrix& mat, const Eigen::VectorXd& y0,
                                         double dt, int steps);

/// Periodic centered-difference semi-discretization of the viscous Burgers
/// equation u_t = -u u_x + nu u_xx on n points over the given domain
/// length. The advective term is bilinearized and symmetrized into Q.
QuadraticSystem burgers_system(int n, double nu, double domain_length = 1.0);

/// Reynolds convention for the Burgers runs: Re = max|u0| * length / nu.
double burgers_reynolds(double u0_max, double domain_length, double nu);

struct TruncationRow {
    int order = 0;
    double error = 0.0;  // relative L2 error at final time vs direct integration
};

/// Truncated-Carleman final-time error against direct nonlinear Euler
/// integration at the same dt, for each order in k_list. Throws
/// std::runtime_error when the reference integration blows up.
std::vector<TruncationRow> truncation_error(const QuadraticSystem& sys, const Eigen::VectorXd& y0,
                                            double dt, int steps, const std::vector<int>& k_list,
                                            std::uint64_t memory_budget_bytes = 1ull << 32);

/// Direct forward-Euler integration of the nonlinear system (the reference
/// the truncation study compares against).
std::vector<Eigen::VectorXd> integrate_reference(const QuadraticSystem& sys,
                                                 const Eigen::VectorXd& y0, double dt, int steps);

}  // namespace carlbm::ode
