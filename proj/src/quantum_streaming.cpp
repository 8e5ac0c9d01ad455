#include "carlbm/quantum_streaming.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace carlbm::quantum {

using lattice::DistributionField;
using lattice::LatticeConfig;
using lattice::VelocitySet;

namespace {

int log2_exact(int v, const char* what) {
    if (v < 1 || (v & (v - 1)) != 0)
        throw std::domain_error(std::string(what) + " must be a power of two, got " +
                                std::to_string(v));
    int e = 0;
    while ((1 << e) < v) ++e;
    return e;
}

bool controls_satisfied(const Gate& g, std::uint64_t basis) {
    for (const Control& c : g.controls) {
        const bool bit = (basis >> c.qubit) & 1ull;
        if (bit != c.positive) return false;
    }
    return true;
}

// Modular +1 / -1 cascade on a register of `width` qubits starting at
// global qubit `base`: flip the most significant bit first, conditioned on
// all lower bits (1-controls for increment, 0-controls for decrement),
// down to the unconditioned flip of the least significant bit.
void append_shift_cascade(Circuit& c, int base, int width, bool increment,
                          const std::vector<Control>& velocity_controls) {
    for (int t = width - 1; t >= 0; --t) {
        Gate g;
        g.target = base + t;
        for (int lower = 0; lower < t; ++lower)
            g.controls.push_back({base + lower, increment});
        g.controls.insert(g.controls.end(), velocity_controls.begin(), velocity_controls.end());
        c.add(std::move(g));
    }
}

}  // namespace

QubitLayout layout_for(const LatticeConfig& cfg) {
    QubitLayout l;
    l.vq = 4;
    l.xq = log2_exact(cfg.nx, "layout_for: nx");
    l.yq = log2_exact(cfg.ny, "layout_for: ny");
    return l;
}

void Circuit::add(Gate g) {
    const int q = layout.total();
    if (g.target < 0 || g.target >= q)
        throw std::invalid_argument("Circuit::add: target out of range");
    for (const Control& ctl : g.controls) {
        if (ctl.qubit < 0 || ctl.qubit >= q)
            throw std::invalid_argument("Circuit::add: control out of range");
        if (ctl.qubit == g.target)
            throw std::invalid_argument("Circuit::add: target cannot be a control");
    }
    gates.push_back(std::move(g));
}

EncodedField encode(const DistributionField& field) {
    LatticeConfig cfg{field.nx, field.ny, 1.0};
    const QubitLayout layout = layout_for(cfg);
    if (layout.total() > kMaxQubits)
        throw std::domain_error("encode: statevector would exceed the " +
                                std::to_string(kMaxQubits) + "-qubit cap");
    double sq = 0.0;
    for (double v : field.f) sq += v * v;
    if (sq == 0.0) throw std::domain_error("encode: cannot normalize an all-zero field");
    EncodedField s;
    s.layout = layout;
    s.norm_factor = std::sqrt(sq);
    s.amplitudes.assign(1ull << layout.total(), {0.0, 0.0});
    for (int i = 0; i < VelocitySet::q; ++i)
        for (int x = 0; x < field.nx; ++x)
            for (int y = 0; y < field.ny; ++y) {
                const std::uint64_t idx = static_cast<std::uint64_t>(i) |
                                          (static_cast<std::uint64_t>(x) << layout.vq) |
                                          (static_cast<std::uint64_t>(y) << (layout.vq + layout.xq));
                s.amplitudes[idx] = field(i, x, y) / s.norm_factor;
            }
    return s;
}

DistributionField decode(const EncodedField& s) {
    DistributionField field(s.layout.nx(), s.layout.ny());
    for (int i = 0; i < VelocitySet::q; ++i)
        for (int x = 0; x < field.nx; ++x)
            for (int y = 0; y < field.ny; ++y) {
                const std::uint64_t idx = static_cast<std::uint64_t>(i) |
                                          (static_cast<std::uint64_t>(x) << s.layout.vq) |
                                          (static_cast<std::uint64_t>(y) << (s.layout.vq + s.layout.xq));
                field(i, x, y) = s.amplitudes[idx].real() * s.norm_factor;
            }
    return field;
}

Circuit streaming_circuit(int i, const QubitLayout& layout) {
    if (i < 0 || i >= VelocitySet::q)
        throw std::domain_error("streaming_circuit: velocity index must be in 0..8");
    Circuit c;
    c.layout = layout;
    const int cx = VelocitySet::cx[i], cy = VelocitySet::cy[i];
    if (cx == 0 && cy == 0) return c;

    // Velocity register selects block i: polarity per bit of i.
    std::vector<Control> vel;
    for (int b = 0; b < layout.vq; ++b) vel.push_back({b, ((i >> b) & 1) != 0});

    if (cx != 0) append_shift_cascade(c, layout.vq, layout.xq, cx > 0, vel);
    if (cy != 0) append_shift_cascade(c, layout.vq + layout.xq, layout.yq, cy > 0, vel);
    return c;
}

Circuit full_streaming_circuit(const QubitLayout& layout) {
    Circuit c;
    c.layout = layout;
    for (int i = 1; i < VelocitySet::q; ++i) {
        Circuit si = streaming_circuit(i, layout);
        for (auto& g : si.gates) c.add(std::move(g));
    }
    return c;
}

EncodedField apply_circuit(const Circuit& c, const EncodedField& s) {
    if (!(c.layout == s.layout))
        throw std::invalid_argument("apply_circuit: circuit and state layouts differ");
    EncodedField out = s;
    const std::uint64_t dim = out.amplitudes.size();
    for (const Gate& g : c.gates) {
        const std::uint64_t tmask = 1ull << g.target;
        for (std::uint64_t n = 0; n < dim; ++n) {
            if (n & tmask) continue;  // visit each (n, n^tmask) pair once
            if (!controls_satisfied(g, n)) continue;
            std::swap(out.amplitudes[n], out.amplitudes[n | tmask]);
        }
    }
    return out;
}

std::vector<std::uint64_t> permutation_check(const Circuit& c) {
    const std::uint64_t dim = 1ull << c.layout.total();
    std::vector<std::uint64_t> perm(dim);
    for (std::uint64_t n = 0; n < dim; ++n) {
        std::uint64_t cur = n;
        for (const Gate& g : c.gates)
            if (controls_satisfied(g, cur)) cur ^= 1ull << g.target;
        perm[n] = cur;
    }
    std::vector<bool> seen(dim, false);
    for (std::uint64_t v : perm) {
        if (v >= dim || seen[v])
            throw std::logic_error("permutation_check: circuit did not act as a bijection");
        seen[v] = true;
    }
    return perm;
}

std::uint64_t DecompositionTable::cx_equivalent(int arity) const {
    auto it = exact.find(arity);
    if (it != exact.end()) return it->second;
    const std::int64_t m = arity;
    const std::int64_t v = a * m * m + b * m + c;
    if (v < 0) throw std::logic_error("DecompositionTable: negative ledger entry");
    return static_cast<std::uint64_t>(v);
}

GateCounts gate_counts(const Circuit& c, const DecompositionTable& table) {
    GateCounts gc;
    for (const Gate& g : c.gates) {
        ++gc.by_arity[g.arity()];
        ++gc.total_gates;
        gc.cx_equivalent += table.cx_equivalent(g.arity());
    }
    return gc;
}

std::string circuit_to_text(const Circuit& c) {
    std::string out;
    for (const Gate& g : c.gates) {
        if (g.is_plain_x()) {
            out += "X t=" + std::to_string(g.target) + "\n";
            continue;
        }
        out += "MCX t=" + std::to_string(g.target) + " c=";
        for (std::size_t k = 0; k < g.controls.size(); ++k) {
            if (k) out += ",";
            out += (g.controls[k].positive ? "+" : "-") + std::to_string(g.controls[k].qubit);
        }
        out += "\n";
    }
    return out;
}

}  // namespace carlbm::quantum
