#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "carlbm/lattice.hpp"

namespace carlbm::quantum {

/// Dense statevector size cap (desk-scale emulator).
inline constexpr int kMaxQubits = 26;

/// Register widths. Global qubit order: velocity qubits [0, vq), then x
/// position qubits [vq, vq+xq), then y position qubits. Little-endian
/// within each register (qubit 0 of a register is its least significant
/// bit), and basis index bit q corresponds to qubit q.
struct QubitLayout {
    int vq = 4;
    int xq = 0;
    int yq = 0;

    int total() const { return vq + xq + yq; }
    int nx() const { return 1 << xq; }
    int ny() const { return 1 << yq; }
    bool operator==(const QubitLayout&) const = default;
};

/// Layout for a power-of-two grid: vq = 4, xq = log2 nx, yq = log2 ny.
/// Throws std::domain_error for non-power-of-two grids.
QubitLayout layout_for(const lattice::LatticeConfig& cfg);

struct Control {
    int qubit = 0;
    bool positive = true;  // negative controls fire on |0>
    bool operator==(const Control&) const = default;
};

/// X or multi-controlled X with per-control polarity.
struct Gate {
    int target = 0;
    std::vector<Control> controls;

    int arity() const { return static_cast<int>(controls.size()); }
    bool is_plain_x() const { return controls.empty(); }
};

/// Ordered gate list over a fixed layout; represents a basis-state
/// permutation (X/MCX only).
struct Circuit {
    QubitLayout layout;
    std::vector<Gate> gates;

    /// Validates target/control indices and appends.
    void add(Gate g);
};

/// Amplitude-encoded distribution field: amplitude at basis index
/// (i, x, y) is f_i(x,y) / norm_factor with norm_factor = ||f||_2.
struct EncodedField {
    QubitLayout layout;
    std::vector<std::complex<double>> amplitudes;
    double norm_factor = 1.0;
};

/// Amplitude-encode a field on a power-of-two grid. Throws
/// std::domain_error for an all-zero field.
EncodedField encode(const lattice::DistributionField& field);

/// Inverse of encode (emulator privilege: real hardware cannot read
/// amplitudes out exactly; that cost is modeled in the cost module).
lattice::DistributionField decode(const EncodedField& s);

/// Streaming circuit S_i: modular increment/decrement cascades on the x
/// and/or y register per c_i, every gate additionally controlled on the
/// velocity register holding the bit pattern of i. i = 0 yields an empty
/// circuit. Throws std::domain_error for i outside 0..8.
Circuit streaming_circuit(int i, const QubitLayout& layout);

/// Concatenation of S_1 .. S_8 (the direct-sum streaming operator).
Circuit full_streaming_circuit(const QubitLayout& layout);

/// Apply the circuit's permutation to the amplitudes. Pure; norm_factor
/// is unchanged. Throws std::invalid_argument on layout mismatch.
EncodedField apply_circuit(const Circuit& c, const EncodedField& s);

/// Extract the basis-state permutation by propagating every basis index
/// through the gate list; verifies bijectivity.
std::vector<std::uint64_t> permutation_check(const Circuit& c);

/// CX-equivalent ledger: exact entries for small arities plus a quadratic
/// no-ancilla model for arity >= 3. Stored as data so alternative ledgers
/// can be swapped in.
struct DecompositionTable {
    std::map<int, std::uint64_t> exact{{0, 0}, {1, 1}, {2, 6}};
    // For arities above the exact entries: a*m^2 + b*m + c.
    std::int64_t a = 2, b = 2, c = -6;

    std::uint64_t cx_equivalent(int arity) const;
};

struct GateCounts {
    std::map<int, std::uint64_t> by_arity;
    std::uint64_t total_gates = 0;
    std::uint64_t cx_equivalent = 0;
};

GateCounts gate_counts(const Circuit& c, const DecompositionTable& table = {});

/// Line-oriented export: `X t=<q>` or `MCX t=<q> c=+<q>,-<q>,...`.
std::string circuit_to_text(const Circuit& c);

}  // namespace carlbm::quantum
