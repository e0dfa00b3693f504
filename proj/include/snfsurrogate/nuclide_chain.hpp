/**
 * @file nuclide_chain.hpp
 * @brief Reduced nuclide chain: decay data, one-group reactions, fission yields.
 *
 * The chain is read from a line-oriented text format:
 *
 *     format snf-chain 1
 *     version <string>
 *     energy_per_fission_MeV <value>
 *     reference_fuel_temp_K <value>
 *     reference_boron_ppm <value>
 *     sink <name>
 *     nuclide <name> <mass_amu> <half_life> <unit: s|m|h|d|y> <heat_MeV>
 *     nuclide <name> <mass_amu> stable
 *     decay <parent> <daughter> <branching>
 *     reaction <parent> capture|n2n <sigma_b> <temp_coeff> <boron_coeff> <prod:frac[,prod:frac...]>
 *     reaction <parent> fission <sigma_b> <temp_coeff> <boron_coeff> <yield_set>
 *     yield <yield_set> <product> <fraction>
 *
 * Blank lines and everything after '#' are ignored. Nuclides must be declared
 * before they are referenced.
 */
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "snfsurrogate/errors.hpp"

namespace snf::oracle {

inline constexpr double kAvogadro = 6.02214076e23;
inline constexpr double kMeVToJoule = 1.602176634e-13;
inline constexpr double kBarnToCm2 = 1e-24;
inline constexpr double kSecondsPerDay = 86400.0;
inline constexpr double kSecondsPerYear = 365.25 * kSecondsPerDay;

struct Nuclide {
    std::string name;
    double mass_amu = 0.0;
    double decay_constant = 0.0;  ///< 1/s
    double heat_per_decay = 0.0;  ///< J
};

struct DecayBranch {
    std::size_t parent = 0;
    std::size_t daughter = 0;
    double fraction = 0.0;
};

enum class ReactionKind { Capture, N2n, Fission };

struct Product {
    std::size_t nuclide = 0;
    double fraction = 0.0;
};

/// One-group reaction. The effective cross section is
/// sigma * (1 + temp_coeff*(T - T_ref)/T_ref) * (1 + boron_coeff*(B - B_ref)/B_ref).
struct Reaction {
    std::size_t parent = 0;
    ReactionKind kind = ReactionKind::Capture;
    double sigma_barn = 0.0;
    double temp_coeff = 0.0;
    double boron_coeff = 0.0;
    std::vector<Product> products;  ///< capture/n2n targets
    std::string yield_set;          ///< fission only
};

class NuclideChain {
public:
    static NuclideChain parse(std::string_view text);
    static NuclideChain load(const std::string& path);

    std::size_t size() const noexcept { return nuclides_.size(); }
    const std::vector<Nuclide>& nuclides() const noexcept { return nuclides_; }
    const std::vector<DecayBranch>& decays() const noexcept { return decays_; }
    const std::vector<Reaction>& reactions() const noexcept { return reactions_; }
    const std::string& version() const noexcept { return version_; }
    std::size_t sink() const noexcept { return sink_; }
    double energy_per_fission() const noexcept { return energy_per_fission_; }
    double reference_fuel_temp() const noexcept { return ref_temp_; }
    double reference_boron() const noexcept { return ref_boron_; }

    std::optional<std::size_t> find(std::string_view name) const {
        for (std::size_t i = 0; i < nuclides_.size(); ++i)
            if (nuclides_[i].name == name) return i;
        return std::nullopt;
    }
    std::size_t index_of(std::string_view name) const {
        if (auto i = find(name)) return *i;
        throw ConfigError("nuclide chain has no nuclide '" + std::string(name) + "'");
    }

    const std::vector<Product>& yields(const std::string& set) const { return yields_.at(set); }

    /// Spectrum modifier for a reaction at the given fuel temperature and boron.
    double modifier(const Reaction& r, double fuel_temp, double boron) const {
        const double m = (1.0 + r.temp_coeff * (fuel_temp - ref_temp_) / ref_temp_) *
                         (1.0 + r.boron_coeff * (boron - ref_boron_) / ref_boron_);
        if (!(m > 0.0)) throw DomainError("non-positive cross-section modifier for " +
                                          nuclides_[r.parent].name);
        return m;
    }

    /// Pure-decay rate matrix: dN/dt = A N. Columns sum to zero.
    Eigen::MatrixXd decay_matrix() const {
        const auto n = static_cast<Eigen::Index>(size());
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t i = 0; i < nuclides_.size(); ++i)
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) -= nuclides_[i].decay_constant;
        for (const auto& d : decays_)
            a(static_cast<Eigen::Index>(d.daughter), static_cast<Eigen::Index>(d.parent)) +=
                nuclides_[d.parent].decay_constant * d.fraction;
        return a;
    }

    /// Decay plus transmutation at scalar flux (n/cm^2/s).
    Eigen::MatrixXd burnup_matrix(double flux, double fuel_temp, double boron) const {
        Eigen::MatrixXd a = decay_matrix();
        for (const auto& r : reactions_) {
            const double rate = flux * r.sigma_barn * kBarnToCm2 * modifier(r, fuel_temp, boron);
            const auto p = static_cast<Eigen::Index>(r.parent);
            a(p, p) -= rate;
            if (r.kind == ReactionKind::Fission) {
                double total = 0.0;
                for (const auto& y : yields_.at(r.yield_set)) {
                    a(static_cast<Eigen::Index>(y.nuclide), p) += rate * y.fraction;
                    total += y.fraction;
                }
                a(static_cast<Eigen::Index>(sink_), p) += rate * (2.0 - total);
            } else {
                for (const auto& prod : r.products)
                    a(static_cast<Eigen::Index>(prod.nuclide), p) += rate * prod.fraction;
            }
        }
        return a;
    }

    /// Fission energy release rate per unit flux (J/s per n/cm^2/s) for a composition.
    double fission_power_per_flux(const Eigen::VectorXd& state, double fuel_temp, double boron) const {
        double sum = 0.0;
        for (const auto& r : reactions_) {
            if (r.kind != ReactionKind::Fission) continue;
            sum += r.sigma_barn * kBarnToCm2 * modifier(r, fuel_temp, boron) *
                   state(static_cast<Eigen::Index>(r.parent));
        }
        return sum * energy_per_fission_;
    }

private:
    void validate() const;

    std::vector<Nuclide> nuclides_;
    std::vector<DecayBranch> decays_;
    std::vector<Reaction> reactions_;
    std::map<std::string, std::vector<Product>> yields_;
    std::string version_;
    std::size_t sink_ = 0;
    double energy_per_fission_ = 0.0;
    double ref_temp_ = 0.0;
    double ref_boron_ = 0.0;
};

namespace detail {

inline double parse_number(const std::string& token, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size()) throw ParseError("trailing characters in number '" + token + "'", line);
        return v;
    } catch (const std::invalid_argument&) {
        throw ParseError("expected a number, got '" + token + "'", line);
    } catch (const std::out_of_range&) {
        throw ParseError("number out of range '" + token + "'", line);
    }
}

inline double time_unit_seconds(const std::string& unit, std::size_t line) {
    if (unit == "s") return 1.0;
    if (unit == "m") return 60.0;
    if (unit == "h") return 3600.0;
    if (unit == "d") return kSecondsPerDay;
    if (unit == "y") return kSecondsPerYear;
    throw ParseError("unknown time unit '" + unit + "'", line);
}

}  // namespace detail

inline NuclideChain NuclideChain::parse(std::string_view text) {
    NuclideChain chain;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    bool have_format = false;
    std::optional<std::string> sink_name;
    std::map<std::string, std::size_t> index;

    auto lookup = [&](const std::string& name, std::size_t line) {
        auto it = index.find(name);
        if (it == index.end()) throw ParseError("undeclared nuclide '" + name + "'", line);
        return it->second;
    };

    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream fields(raw);
        std::vector<std::string> tok;
        for (std::string t; fields >> t;) tok.push_back(t);
        if (tok.empty()) continue;

        const std::string& key = tok[0];
        auto need = [&](std::size_t n) {
            if (tok.size() != n)
                throw ParseError("'" + key + "' expects " + std::to_string(n - 1) + " fields", line_no);
        };

        if (key == "format") {
            need(3);
            if (tok[1] != "snf-chain" || tok[2] != "1")
                throw ParseError("unsupported chain format '" + tok[1] + " " + tok[2] + "'", line_no);
            have_format = true;
        } else if (!have_format) {
            throw ParseError("chain file must start with 'format snf-chain 1'", line_no);
        } else if (key == "version") {
            need(2);
            chain.version_ = tok[1];
        } else if (key == "energy_per_fission_MeV") {
            need(2);
            chain.energy_per_fission_ = detail::parse_number(tok[1], line_no) * kMeVToJoule;
        } else if (key == "reference_fuel_temp_K") {
            need(2);
            chain.ref_temp_ = detail::parse_number(tok[1], line_no);
        } else if (key == "reference_boron_ppm") {
            need(2);
            chain.ref_boron_ = detail::parse_number(tok[1], line_no);
        } else if (key == "sink") {
            need(2);
            sink_name = tok[1];
        } else if (key == "nuclide") {
            Nuclide n;
            if (tok.size() == 4 && tok[3] == "stable") {
                n.name = tok[1];
                n.mass_amu = detail::parse_number(tok[2], line_no);
            } else {
                need(6);
                n.name = tok[1];
                n.mass_amu = detail::parse_number(tok[2], line_no);
                const double half_life =
                    detail::parse_number(tok[3], line_no) * detail::time_unit_seconds(tok[4], line_no);
                if (!(half_life > 0.0)) throw ParseError("half-life must be positive", line_no);
                n.decay_constant = std::log(2.0) / half_life;
                n.heat_per_decay = detail::parse_number(tok[5], line_no) * kMeVToJoule;
            }
            if (index.contains(n.name)) throw ParseError("duplicate nuclide '" + n.name + "'", line_no);
            index[n.name] = chain.nuclides_.size();
            chain.nuclides_.push_back(std::move(n));
        } else if (key == "decay") {
            need(4);
            chain.decays_.push_back({lookup(tok[1], line_no), lookup(tok[2], line_no),
                                     detail::parse_number(tok[3], line_no)});
        } else if (key == "reaction") {
            need(7);
            Reaction r;
            r.parent = lookup(tok[1], line_no);
            if (tok[2] == "capture") {
                r.kind = ReactionKind::Capture;
            } else if (tok[2] == "n2n") {
                r.kind = ReactionKind::N2n;
            } else if (tok[2] == "fission") {
                r.kind = ReactionKind::Fission;
            } else {
                throw ParseError("unknown reaction kind '" + tok[2] + "'", line_no);
            }
            r.sigma_barn = detail::parse_number(tok[3], line_no);
            r.temp_coeff = detail::parse_number(tok[4], line_no);
            r.boron_coeff = detail::parse_number(tok[5], line_no);
            if (r.kind == ReactionKind::Fission) {
                r.yield_set = tok[6];
            } else {
                std::istringstream list(tok[6]);
                for (std::string item; std::getline(list, item, ',');) {
                    const auto colon = item.find(':');
                    if (colon == std::string::npos)
                        throw ParseError("product must be name:fraction, got '" + item + "'", line_no);
                    r.products.push_back({lookup(item.substr(0, colon), line_no),
                                          detail::parse_number(item.substr(colon + 1), line_no)});
                }
            }
            chain.reactions_.push_back(std::move(r));
        } else if (key == "yield") {
            need(4);
            chain.yields_[tok[1]].push_back(
                {lookup(tok[2], line_no), detail::parse_number(tok[3], line_no)});
        } else {
            throw ParseError("unknown record '" + key + "'", line_no);
        }
    }

    if (!have_format) throw ParseError("empty chain file", line_no);
    if (!sink_name) throw ParseError("chain declares no sink nuclide", line_no);
    chain.sink_ = lookup(*sink_name, line_no);
    chain.validate();
    return chain;
}

inline NuclideChain NuclideChain::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open nuclide chain file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

inline void NuclideChain::validate() const {
    constexpr double tol = 1e-9;
    if (!(energy_per_fission_ > 0.0)) throw ConfigError("chain: energy_per_fission must be positive");
    if (!(ref_temp_ > 0.0) || !(ref_boron_ > 0.0))
        throw ConfigError("chain: reference fuel temperature and boron must be positive");
    if (nuclides_[sink_].decay_constant != 0.0) throw ConfigError("chain: sink nuclide must be stable");

    std::vector<double> branch_sum(nuclides_.size(), 0.0);
    for (const auto& d : decays_) {
        if (d.fraction < 0.0) throw ConfigError("chain: negative decay branching");
        if (d.parent == d.daughter) throw ConfigError("chain: self-decay of " + nuclides_[d.parent].name);
        branch_sum[d.parent] += d.fraction;
    }
    for (std::size_t i = 0; i < nuclides_.size(); ++i) {
        const auto& n = nuclides_[i];
        if (n.decay_constant < 0.0 || n.heat_per_decay < 0.0)
            throw ConfigError("chain: negative decay data for " + n.name);
        const double expected = n.decay_constant > 0.0 ? 1.0 : 0.0;
        if (std::abs(branch_sum[i] - expected) > tol)
            throw ConfigError("chain: decay branchings of " + n.name + " must sum to " +
                              (expected > 0.0 ? std::string("1") : std::string("0")));
    }
    for (const auto& r : reactions_) {
        if (r.sigma_barn < 0.0) throw ConfigError("chain: negative cross section");
        if (r.kind == ReactionKind::Fission) {
            auto it = yields_.find(r.yield_set);
            if (it == yields_.end()) throw ConfigError("chain: unknown yield set '" + r.yield_set + "'");
        } else {
            double s = 0.0;
            for (const auto& p : r.products) s += p.fraction;
            if (std::abs(s - 1.0) > tol)
                throw ConfigError("chain: reaction products of " + nuclides_[r.parent].name +
                                  " must sum to 1");
        }
    }
    for (const auto& [name, set] : yields_) {
        double s = 0.0;
        for (const auto& y : set) {
            if (y.fraction < 0.0) throw ConfigError("chain: negative fission yield in " + name);
            s += y.fraction;
        }
        if (s > 2.0 + tol) throw ConfigError("chain: fission yields of " + name + " exceed 2");
    }
}

}  // namespace snf::oracle
