#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace carlbm::cost {

/// One resource figure with the formula that produced it.
struct CostFigure {
    std::string name;
    std::string value;  // exact decimal integer
    std::string provenance;
};

/// Emission vehicle for resource tables.
struct CostReport {
    std::vector<CostFigure> figures;

    void add(std::string name, std::uint64_t value, std::string provenance);
    void add(std::string name, std::string value, std::string provenance);
    std::string to_csv() const;   // header: metric,value,provenance
    std::string to_text() const;  // aligned human-readable table
};

/// Minimum qubits for Re^3 complexity: ceil(3 log2 Re). Throws
/// std::domain_error for re <= 1.
int qubit_estimate(double re);

/// Two-qubit-gate bound for a generic q-qubit unitary: 4^q. Throws
/// std::overflow_error beyond 64 bits (q > 31); use pow4_decimal then.
std::uint64_t generic_unitary_bound(int q);

/// Exact decimal of 4^q for any q >= 0 (big-integer fallback for the
/// generic bound).
std::string pow4_decimal(int q);

/// Independent Carleman components at level k: g * kappa^(k-1).
/// Throws std::overflow_error if the count exceeds 64 bits.
std::uint64_t carleman_variable_count(std::uint64_t g, std::uint64_t kappa, int k);

/// Additional quantum registers for the Carleman circuits: k+1 for the
/// collision-only scheme, 2(k+1) for the fully quantum one.
int carleman_register_count(int k, bool fully_quantum);

/// Naive hybrid-step cost model ("model, not measurement"): per-step Q2C
/// readout shots scale quadratically with grid size at fixed precision;
/// C2Q re-initialization is one full preparation of 9g amplitudes.
struct HybridCostModel {
    std::uint64_t readout_grid_coefficient = 1;  // prefactor of the g^2 scaling
};

/// shots_per_amplitude = ceil(1/precision^2); readout_shots =
/// coeff * g^2 * shots_per_amplitude; prep_amplitudes = 9g.
CostReport hybrid_step_cost(std::uint64_t g, double precision, const HybridCostModel& model = {});

}  // namespace carlbm::cost
