/**
 * @file history.hpp
 * @brief Assembly inputs and burnup/cooling irradiation histories.
 */
#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "snfsurrogate/errors.hpp"

namespace snf::oracle {

/// The five sampled scalars, in the global column order used everywhere.
struct AssemblyInput {
    double enrichment = 0.0;    ///< wt% U-235
    double burnup = 0.0;        ///< MWd/kgU
    double fuel_temp = 0.0;     ///< K
    double boron = 0.0;         ///< ppm, cycle average
    double cooling_days = 0.0;  ///< total inter-cycle cooling

    static constexpr std::size_t kDim = 5;

    std::array<double, kDim> to_array() const {
        return {enrichment, burnup, fuel_temp, boron, cooling_days};
    }
    static AssemblyInput from_array(const std::array<double, kDim>& a) {
        return {a[0], a[1], a[2], a[3], a[4]};
    }

    void validate() const {
        for (double v : to_array())
            if (!std::isfinite(v) || !(v > 0.0))
                throw DomainError("assembly input fields must be finite and strictly positive");
        if (!(enrichment < 100.0)) throw DomainError("enrichment must be below 100%");
    }
};

inline constexpr std::array<const char*, AssemblyInput::kDim> kInputNames = {
    "enrichment_pct", "burnup_MWdkgU", "fuel_temp_K", "boron_ppm", "cooling_days"};

struct Cycle {
    enum class Kind { Burnup, Cooling };

    Kind kind = Kind::Burnup;
    double burnup = 0.0;    ///< MWd/kgU, Burnup only
    double power = 0.0;     ///< W/gU, Burnup only
    double boron = 0.0;     ///< ppm, Burnup only
    double duration = 0.0;  ///< days, Cooling only

    static Cycle burn(double burnup, double power, double boron) {
        return {Kind::Burnup, burnup, power, boron, 0.0};
    }
    static Cycle cool(double days) { return {Kind::Cooling, 0.0, 0.0, 0.0, days}; }

    bool is_burnup() const noexcept { return kind == Kind::Burnup; }

    /// Length in days. Burnup cycles derive it: MWd/kgU over W/gU is 1000 days.
    double duration_days() const {
        if (!is_burnup()) return duration;
        if (!(power > 0.0)) throw DomainError("burnup cycle power must be positive");
        return 1000.0 * burnup / power;
    }

    bool operator==(const Cycle&) const = default;
};

struct IrradiationHistory {
    std::vector<Cycle> cycles;
    double fuel_temp = 0.0;  ///< K, applied to every cycle

    double total_burnup() const {
        double s = 0.0;
        for (const auto& c : cycles)
            if (c.is_burnup()) s += c.burnup;
        return s;
    }
    double total_cooling_days() const {
        double s = 0.0;
        for (const auto& c : cycles)
            if (!c.is_burnup()) s += c.duration;
        return s;
    }
    /// Unweighted average over burnup cycles.
    double mean_boron() const {
        double s = 0.0;
        std::size_t n = 0;
        for (const auto& c : cycles)
            if (c.is_burnup()) {
                s += c.boron;
                ++n;
            }
        return n ? s / static_cast<double>(n) : 0.0;
    }

    /// Burnup and cooling cycles alternate, starting and ending with burnup.
    void validate() const {
        if (cycles.empty() || !cycles.front().is_burnup() || !cycles.back().is_burnup())
            throw ConfigError("irradiation history must start and end with a burnup cycle");
        for (std::size_t i = 0; i < cycles.size(); ++i) {
            const auto& c = cycles[i];
            if (c.is_burnup() != (i % 2 == 0))
                throw ConfigError("irradiation history must alternate burnup and cooling cycles");
            if (c.is_burnup()) {
                if (c.duration != 0.0) throw ConfigError("burnup cycles carry no explicit duration");
                if (!(c.burnup > 0.0) || !(c.power > 0.0) || c.boron < 0.0)
                    throw ConfigError("burnup cycle needs positive burnup and power");
            } else {
                if (c.burnup != 0.0 || c.power != 0.0 || c.boron != 0.0)
                    throw ConfigError("cooling cycles carry no burnup, power or boron");
                if (c.duration < 0.0) throw ConfigError("cooling duration must be non-negative");
            }
        }
        if (!(fuel_temp > 0.0)) throw ConfigError("fuel temperature must be positive");
    }

    bool operator==(const IrradiationHistory&) const = default;
};

/// Ringhals-2 assembly C20: four burnup cycles separated by three cooling periods.
inline IrradiationHistory reference_history() {
    return {{Cycle::burn(11.247, 10.9, 143.0), Cycle::cool(85.0), Cycle::burn(9.377, 35.1, 459.0),
             Cycle::cool(56.0), Cycle::burn(7.454, 23.9, 342.0), Cycle::cool(1927.0),
             Cycle::burn(7.642, 28.7, 299.0)},
            887.0};
}

/// Enrichment of the reference assembly, wt%.
inline constexpr double kReferenceEnrichment = 3.095;

/// Rescales per-cycle burnup, boron and cooling so the history totals match the
/// input, keeping the ratios between cycles and the cycle powers.
inline IrradiationHistory build_history(const IrradiationHistory& base, const AssemblyInput& input) {
    base.validate();
    const double burnup = base.total_burnup();
    const double cooling = base.total_cooling_days();
    const double boron = base.mean_boron();
    if (!(burnup > 0.0) || !(cooling > 0.0) || !(boron > 0.0))
        throw ConfigError("degenerate base history: zero total burnup, cooling or mean boron");

    const double burnup_scale = input.burnup / burnup;
    const double boron_scale = input.boron / boron;
    const double cooling_scale = input.cooling_days / cooling;

    IrradiationHistory out = base;
    out.fuel_temp = input.fuel_temp;
    for (auto& c : out.cycles) {
        if (c.is_burnup()) {
            c.burnup *= burnup_scale;
            c.boron *= boron_scale;
        } else {
            c.duration *= cooling_scale;
        }
    }
    return out;
}

/// The reference assembly expressed as an input vector.
inline AssemblyInput reference_input() {
    const auto h = reference_history();
    return {kReferenceEnrichment, h.total_burnup(), h.fuel_temp, h.mean_boron(), h.total_cooling_days()};
}

}  // namespace snf::oracle
