/**
 * @file oracle.hpp
 * @brief Reduced-order depletion model producing the 53 spent-fuel outputs.
 *
 * An assembly input is turned into a scaled copy of the reference history,
 * fresh UO2 is depleted cycle by cycle, nuclide masses are recorded at end of
 * life, and the inventory is then decayed to each reporting time to evaluate
 * decay heat. Burnup cycles use a one-group flux that is renormalised at every
 * substep so that fission power matches the cycle power.
 */
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "snfsurrogate/default_chain.hpp"
#include "snfsurrogate/errors.hpp"
#include "snfsurrogate/history.hpp"
#include "snfsurrogate/matrix_exp.hpp"
#include "snfsurrogate/nuclide_chain.hpp"

namespace snf::oracle {

inline constexpr std::size_t kDecayHeatCount = 25;
inline constexpr std::size_t kNuclideCount = 28;
inline constexpr std::size_t kOutputCount = kDecayHeatCount + kNuclideCount;

/// Reporting times after end of life, years: 2, 5, 10..30, 100, 1000.
inline constexpr std::array<double, kDecayHeatCount> kCoolingYears = {
    2, 5, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 21, 22, 23, 24, 25, 26, 27, 28, 29, 30, 100, 1000};

/// Reported nuclides, in output column order.
inline constexpr std::array<const char*, kNuclideCount> kReportedNuclides = {
    "U234",  "U235",  "U236",  "U238",  "Np237", "Pu236", "Pu238", "Pu239", "Pu240", "Pu241",
    "Pu242", "Am241", "Am242m", "Am243", "Cm242", "Cm243", "Cm244", "Cm245", "Cm246", "U233",
    "U237",  "Np238", "Np239", "Am242", "Cm247", "Cm248", "Cs137", "Sr90"};

/// Burnup cycles are integrated in this many equal substeps.
inline constexpr int kBurnupSubsteps = 4;

inline constexpr double kGramsPerTonne = 1e6;

/// Decay heat in W/tU followed by EOL concentrations in g/tU.
struct SnfOutput {
    std::array<double, kDecayHeatCount> decay_heat{};
    std::array<double, kNuclideCount> concentrations{};

    std::array<double, kOutputCount> to_array() const {
        std::array<double, kOutputCount> out{};
        std::copy(decay_heat.begin(), decay_heat.end(), out.begin());
        std::copy(concentrations.begin(), concentrations.end(), out.begin() + kDecayHeatCount);
        return out;
    }
    static SnfOutput from_array(const std::array<double, kOutputCount>& a) {
        SnfOutput o;
        std::copy(a.begin(), a.begin() + kDecayHeatCount, o.decay_heat.begin());
        std::copy(a.begin() + kDecayHeatCount, a.end(), o.concentrations.begin());
        return o;
    }
    bool operator==(const SnfOutput&) const = default;
};

/// Output column names: dh_2y ... dh_1000y then nuclide names.
inline std::vector<std::string> output_names() {
    std::vector<std::string> names;
    names.reserve(kOutputCount);
    for (double y : kCoolingYears) names.push_back("dh_" + std::to_string(static_cast<int>(y)) + "y");
    for (const char* n : kReportedNuclides) names.emplace_back(n);
    return names;
}

namespace detail {

inline Eigen::VectorXd propagate(const Eigen::MatrixXd& rates, double seconds, const Eigen::VectorXd& state) {
    Eigen::VectorXd out = matrix_exp(rates * seconds) * state;
    const double scale = state.cwiseAbs().sum();
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        if (!std::isfinite(out(i))) throw DataError("depletion produced a non-finite amount");
        if (out(i) < 0.0) {
            if (out(i) < -1e-10 * scale) throw DataError("depletion produced a negative amount");
            out(i) = 0.0;
        }
    }
    return out;
}

inline void check_state(const Eigen::VectorXd& state, std::size_t expected) {
    if (static_cast<std::size_t>(state.size()) != expected)
        throw SizeError("state vector length does not match the nuclide chain");
    for (Eigen::Index i = 0; i < state.size(); ++i) {
        if (!std::isfinite(state(i))) throw DataError("non-finite nuclide amount");
        if (state(i) < 0.0) throw DomainError("negative nuclide amount");
    }
}

}  // namespace detail

/// Advances a nuclide-amount vector (atoms per tU) through one cycle.
/// Cooling cycles apply pure decay; burnup cycles add transmutation at the
/// cycle power, boron and the given fuel temperature.
inline Eigen::VectorXd deplete_cycle(const Eigen::VectorXd& state, const Cycle& cycle,
                                     const NuclideChain& chain, double fuel_temp) {
    detail::check_state(state, chain.size());
    const double seconds = cycle.duration_days() * kSecondsPerDay;
    if (!cycle.is_burnup()) return detail::propagate(chain.decay_matrix(), seconds, state);

    const double power_per_tonne = cycle.power * kGramsPerTonne;  // W/tU
    const double dt = seconds / kBurnupSubsteps;
    Eigen::VectorXd n = state;
    for (int step = 0; step < kBurnupSubsteps; ++step) {
        const double per_flux = chain.fission_power_per_flux(n, fuel_temp, cycle.boron);
        if (!(per_flux > 0.0)) throw DomainError("burnup cycle without fissile material");
        const double flux = power_per_tonne / per_flux;
        n = detail::propagate(chain.burnup_matrix(flux, fuel_temp, cycle.boron), dt, n);
    }
    return n;
}

/// Fresh UO2: enrichment wt% U-235, the rest U-238, in atoms per tU.
inline Eigen::VectorXd fresh_fuel(const NuclideChain& chain, double enrichment) {
    Eigen::VectorXd n = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(chain.size()));
    const auto u235 = chain.index_of("U235");
    const auto u238 = chain.index_of("U238");
    const auto& nuc = chain.nuclides();
    n(static_cast<Eigen::Index>(u235)) =
        kGramsPerTonne * enrichment / 100.0 / nuc[u235].mass_amu * kAvogadro;
    n(static_cast<Eigen::Index>(u238)) =
        kGramsPerTonne * (100.0 - enrichment) / 100.0 / nuc[u238].mass_amu * kAvogadro;
    return n;
}

/// Decay heat in W/tU for a state in atoms per tU.
inline double decay_heat(const NuclideChain& chain, const Eigen::VectorXd& state) {
    double w = 0.0;
    const auto& nuc = chain.nuclides();
    for (std::size_t i = 0; i < nuc.size(); ++i)
        w += nuc[i].decay_constant * nuc[i].heat_per_decay * state(static_cast<Eigen::Index>(i));
    return w;
}

/// Immutable depletion model bound to one nuclide chain; safe to share across threads.
class Oracle {
public:
    explicit Oracle(NuclideChain chain) : chain_(std::move(chain)) {
        for (std::size_t i = 0; i < kNuclideCount; ++i) reported_[i] = chain_.index_of(kReportedNuclides[i]);
        chain_.index_of("U235");
        chain_.index_of("U238");
        const Eigen::MatrixXd decay = chain_.decay_matrix();
        double previous = 0.0;
        for (double years : kCoolingYears) {
            steps_.push_back(matrix_exp(decay * ((years - previous) * kSecondsPerYear)));
            previous = years;
        }
    }

    const NuclideChain& chain() const noexcept { return chain_; }

    /// Nuclide inventory at end of life.
    Eigen::VectorXd end_of_life(const AssemblyInput& input) const {
        input.validate();
        const auto history = build_history(reference_history(), input);
        Eigen::VectorXd n = fresh_fuel(chain_, input.enrichment);
        for (const auto& c : history.cycles) n = deplete_cycle(n, c, chain_, history.fuel_temp);
        return n;
    }

    SnfOutput simulate(const AssemblyInput& input) const {
        Eigen::VectorXd n = end_of_life(input);
        SnfOutput out;
        const auto& nuc = chain_.nuclides();
        for (std::size_t i = 0; i < kNuclideCount; ++i) {
            const auto k = reported_[i];
            out.concentrations[i] = n(static_cast<Eigen::Index>(k)) * nuc[k].mass_amu / kAvogadro;
        }
        for (std::size_t t = 0; t < kDecayHeatCount; ++t) {
            n = steps_[t] * n;
            n = n.cwiseMax(0.0);
            out.decay_heat[t] = decay_heat(chain_, n);
        }
        return out;
    }

private:
    NuclideChain chain_;
    std::array<std::size_t, kNuclideCount> reported_{};
    std::vector<Eigen::MatrixXd> steps_;
};

/// Process-wide oracle on the embedded chain.
inline const Oracle& default_oracle() {
    static const Oracle oracle(NuclideChain::parse(kDefaultChainText));
    return oracle;
}

inline SnfOutput simulate(const AssemblyInput& input) { return default_oracle().simulate(input); }

}  // namespace snf::oracle
