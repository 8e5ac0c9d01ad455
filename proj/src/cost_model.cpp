#include "carlbm/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace carlbm::cost {

void CostReport::add(std::string name, std::uint64_t value, std::string provenance) {
    figures.push_back({std::move(name), std::to_string(value), std::move(provenance)});
}

void CostReport::add(std::string name, std::string value, std::string provenance) {
    figures.push_back({std::move(name), std::move(value), std::move(provenance)});
}

std::string CostReport::to_csv() const {
    std::string out = "metric,value,provenance\n";
    for (const auto& f : figures) out += f.name + "," + f.value + "," + f.provenance + "\n";
    return out;
}

std::string CostReport::to_text() const {
    std::size_t wn = 6, wv = 5;
    for (const auto& f : figures) {
        wn = std::max(wn, f.name.size());
        wv = std::max(wv, f.value.size());
    }
    std::string out;
    auto pad = [](const std::string& s, std::size_t w) {
        return s + std::string(w - s.size(), ' ');
    };
    out += pad("metric", wn) + "  " + pad("value", wv) + "  provenance\n";
    for (const auto& f : figures) out += pad(f.name, wn) + "  " + pad(f.value, wv) + "  " + f.provenance + "\n";
    return out;
}

int qubit_estimate(double re) {
    if (!(re > 1.0)) throw std::domain_error("qubit_estimate: Re must exceed 1");
    const double v = 3.0 * std::log2(re);
    // Nudge keeps exactly-integral arguments (Re = 2^(k/3)) from rounding up.
    return static_cast<int>(std::ceil(v - 1e-9));
}

std::uint64_t generic_unitary_bound(int q) {
    if (q < 1) throw std::domain_error("generic_unitary_bound: q must be >= 1");
    if (q > 31)
        throw std::overflow_error(
            "generic_unitary_bound: 4^" + std::to_string(q) +
            " exceeds 64 bits; use pow4_decimal for the exact value");
    return 1ull << (2 * q);
}

std::string pow4_decimal(int q) {
    if (q < 0) throw std::domain_error("pow4_decimal: q must be >= 0");
    // 4^q = 2^(2q) by schoolbook doubling of a decimal string.
    std::vector<int> digits{1};  // little-endian decimal
    for (int d = 0; d < 2 * q; ++d) {
        int carry = 0;
        for (int& dig : digits) {
            const int v = dig * 2 + carry;
            dig = v % 10;
            carry = v / 10;
        }
        while (carry) {
            digits.push_back(carry % 10);
            carry /= 10;
        }
    }
    std::string out(digits.size(), '0');
    for (std::size_t i = 0; i < digits.size(); ++i)
        out[i] = static_cast<char>('0' + digits[digits.size() - 1 - i]);
    return out;
}

std::uint64_t carleman_variable_count(std::uint64_t g, std::uint64_t kappa, int k) {
    if (g == 0 || kappa == 0 || k < 1)
        throw std::domain_error("carleman_variable_count: arguments must be positive");
    unsigned __int128 acc = g;
    for (int i = 1; i < k; ++i) {
        acc *= kappa;
        if (acc > static_cast<unsigned __int128>(UINT64_MAX))
            throw std::overflow_error("carleman_variable_count: exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(acc);
}

int carleman_register_count(int k, bool fully_quantum) {
    if (k < 1) throw std::domain_error("carleman_register_count: k must be >= 1");
    return fully_quantum ? 2 * (k + 1) : k + 1;
}

CostReport hybrid_step_cost(std::uint64_t g, double precision, const HybridCostModel& model) {
    if (g == 0) throw std::domain_error("hybrid_step_cost: grid size must be positive");
    if (!(precision > 0.0) || !(precision <= 1.0))
        throw std::domain_error("hybrid_step_cost: precision must lie in (0, 1]");
    const double inv_sq = 1.0 / (precision * precision);
    const std::uint64_t shots_per_amplitude =
        static_cast<std::uint64_t>(std::ceil(inv_sq * (1.0 - 1e-9)));
    const unsigned __int128 readout = static_cast<unsigned __int128>(model.readout_grid_coefficient) *
                                      g * g * shots_per_amplitude;
    if (readout > static_cast<unsigned __int128>(UINT64_MAX))
        throw std::overflow_error("hybrid_step_cost: shot count exceeds 64 bits");

    CostReport rep;
    rep.add("shots_per_amplitude", shots_per_amplitude,
            "model, not measurement: ceil(1/precision^2)");
    rep.add("q2c_readout_shots", static_cast<std::uint64_t>(readout),
            "model, not measurement: coeff * g^2 * shots_per_amplitude");
    rep.add("c2q_prep_amplitudes", 9 * g, "one full state preparation of 9g amplitudes");
    return rep;
}

}  // namespace carlbm::cost
