/**
 * @file sobol.hpp
 * @brief Saltelli cross-sampling and first/total-order Sobol' indices.
 *
 * Design layout for n base rows and d inputs (N_total = n (2d + 2)):
 *
 *     rows [0, n)                 A
 *     rows [n, 2n)                B
 *     rows [(2+i) n, (3+i) n)     A_B^(i): A with column i taken from B
 *     rows [(2+d+i) n, (3+d+i) n) B_A^(i): B with column i taken from A
 *
 * With V the variance of f over the pooled A and B rows, the estimators are
 *
 *     S1_i = 1/2 [ mean(f_B (f_AB_i - f_A)) + mean(f_A (f_BA_i - f_B)) ] / V
 *     ST_i = 1/2 [ mean((f_A - f_AB_i)^2) + mean((f_B - f_BA_i)^2) ] / (2V)
 *
 * i.e. the Saltelli (2010) first-order and Jansen total-order estimators,
 * each averaged with its A<->B mirror. Standard errors come from bootstrap
 * resampling of the base rows.
 */
#pragma once

#include <Eigen/Dense>
#include <boost/math/distributions/normal.hpp>

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "snfsurrogate/errors.hpp"
#include "snfsurrogate/seeding.hpp"
#include "snfsurrogate/uq.hpp"

namespace snf::analysis {

/// Inverse CDF of one input's marginal distribution, u in (0, 1).
using Marginal = std::function<double(double)>;

inline Marginal uniform_marginal(double lo, double hi) {
    return [lo, hi](double u) { return lo + (hi - lo) * u; };
}

/// Normal(mean, sd) truncated to positive values, via the inverse CDF.
inline Marginal positive_normal_marginal(double mean, double sd) {
    const boost::math::normal_distribution<double> dist(mean, sd);
    const double p0 = boost::math::cdf(dist, 0.0);
    return [dist, p0](double u) { return boost::math::quantile(dist, p0 + (1.0 - p0) * u); };
}

inline std::vector<Marginal> normal_marginals(const UqSpec& spec) {
    std::vector<Marginal> m;
    for (double c : spec.center.to_array()) m.push_back(positive_normal_marginal(c, spec.rel_std * c));
    return m;
}

struct SaltelliDesign {
    Eigen::MatrixXd samples;  ///< N_total x d
    std::size_t n_base = 0;
    std::size_t dim = 0;

    std::size_t a_offset() const { return 0; }
    std::size_t b_offset() const { return n_base; }
    std::size_t ab_offset(std::size_t i) const { return (2 + i) * n_base; }
    std::size_t ba_offset(std::size_t i) const { return (2 + dim + i) * n_base; }
    std::size_t total() const { return n_base * (2 * dim + 2); }
};

/// Sobol' low-discrepancy points in [0, 1)^dim (Joe-Kuo direction numbers),
/// each dimension XOR-shifted by a seeded random 32-bit word.
class SobolSequence {
public:
    static constexpr std::size_t kMaxDim = 13;

    SobolSequence(std::size_t dim, std::uint64_t seed) : dim_(dim), v_(dim), x_(dim, 0), shift_(dim) {
        if (dim == 0 || dim > kMaxDim) throw ConfigError("Sobol' sequence supports 1 to 13 dimensions");
        struct Poly {
            unsigned s, a;
            std::array<unsigned, 5> m;
        };
        static constexpr std::array<Poly, kMaxDim - 1> kPolys{{{1, 0, {1}},
                                                               {2, 1, {1, 3}},
                                                               {3, 1, {1, 3, 1}},
                                                               {3, 2, {1, 1, 1}},
                                                               {4, 1, {1, 1, 3, 3}},
                                                               {4, 4, {1, 3, 5, 13}},
                                                               {5, 2, {1, 1, 5, 5, 17}},
                                                               {5, 4, {1, 1, 5, 5, 5}},
                                                               {5, 7, {1, 1, 7, 11, 19}},
                                                               {5, 11, {1, 1, 5, 1, 1}},
                                                               {5, 13, {1, 1, 1, 3, 11}},
                                                               {5, 14, {1, 3, 5, 5, 31}}}};
        for (unsigned k = 0; k < kBits; ++k) v_[0][k] = 1u << (kBits - 1 - k);
        for (std::size_t j = 1; j < dim; ++j) {
            const Poly& p = kPolys[j - 1];
            auto& v = v_[j];
            for (unsigned k = 0; k < p.s; ++k) v[k] = p.m[k] << (kBits - 1 - k);
            for (unsigned k = p.s; k < kBits; ++k) {
                v[k] = v[k - p.s] ^ (v[k - p.s] >> p.s);
                for (unsigned i = 1; i < p.s; ++i)
                    if ((p.a >> (p.s - 1 - i)) & 1u) v[k] ^= v[k - i];
            }
        }
        std::mt19937_64 rng(seed);
        for (auto& s : shift_) s = static_cast<std::uint32_t>(rng() >> 32);
    }

    /// Next point; the first call returns the (shifted) origin.
    std::vector<double> next() {
        std::vector<double> u(dim_);
        for (std::size_t j = 0; j < dim_; ++j)
            u[j] = (static_cast<double>(x_[j] ^ shift_[j]) + 0.5) / 4294967296.0;
        const auto c = static_cast<unsigned>(std::countr_one(index_++));
        if (c >= kBits) throw ConfigError("Sobol' sequence exhausted");
        for (std::size_t j = 0; j < dim_; ++j) x_[j] ^= v_[j][c];
        return u;
    }

private:
    static constexpr unsigned kBits = 32;
    std::size_t dim_;
    std::vector<std::array<std::uint32_t, kBits>> v_;
    std::vector<std::uint32_t> x_;
    std::vector<std::uint32_t> shift_;
    std::uint64_t index_ = 0;
};

/// Cross-sampled design from n_base points of a 2d-dimensional shifted
/// Sobol' sequence: the first d coordinates form A, the last d form B.
inline SaltelliDesign saltelli_sample(std::size_t n_base, const std::vector<Marginal>& marginals, std::uint64_t seed) {
    if (n_base == 0 || !std::has_single_bit(n_base)) throw ConfigError("n_base must be a power of two");
    if (marginals.empty()) throw ConfigError("Saltelli design needs at least one input");
    const std::size_t d = marginals.size();
    if (2 * d > SobolSequence::kMaxDim) throw ConfigError("Saltelli design supports at most 6 inputs");
    SobolSequence seq(2 * d, seed);
    Eigen::MatrixXd a(static_cast<Eigen::Index>(n_base), static_cast<Eigen::Index>(d));
    Eigen::MatrixXd b(static_cast<Eigen::Index>(n_base), static_cast<Eigen::Index>(d));
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        const auto u = seq.next();
        for (std::size_t j = 0; j < d; ++j) {
            a(r, static_cast<Eigen::Index>(j)) = marginals[j](u[j]);
            b(r, static_cast<Eigen::Index>(j)) = marginals[j](u[d + j]);
        }
    }

    SaltelliDesign design;
    design.n_base = n_base;
    design.dim = d;
    design.samples.resize(static_cast<Eigen::Index>(design.total()), static_cast<Eigen::Index>(d));
    const auto n = static_cast<Eigen::Index>(n_base);
    design.samples.middleRows(static_cast<Eigen::Index>(design.a_offset()), n) = a;
    design.samples.middleRows(static_cast<Eigen::Index>(design.b_offset()), n) = b;
    for (std::size_t i = 0; i < d; ++i) {
        Eigen::MatrixXd ab = a;
        ab.col(static_cast<Eigen::Index>(i)) = b.col(static_cast<Eigen::Index>(i));
        design.samples.middleRows(static_cast<Eigen::Index>(design.ab_offset(i)), n) = ab;
        Eigen::MatrixXd ba = b;
        ba.col(static_cast<Eigen::Index>(i)) = a.col(static_cast<Eigen::Index>(i));
        design.samples.middleRows(static_cast<Eigen::Index>(design.ba_offset(i)), n) = ba;
    }
    return design;
}

inline SaltelliDesign saltelli_sample(std::size_t n_base, const UqSpec& spec) {
    spec.validate();
    return saltelli_sample(n_base, normal_marginals(spec), spec.seed);
}

struct SobolResult {
    Eigen::MatrixXd s1;     ///< d x K first-order indices
    Eigen::MatrixXd st;     ///< d x K total-order indices
    Eigen::MatrixXd s1_se;  ///< bootstrap standard errors
    Eigen::MatrixXd st_se;
    std::vector<bool> defined;  ///< false where the output has zero variance
    std::size_t n_base = 0;
    std::string evaluator;      ///< "surrogate" or "oracle"
};

namespace detail {

// Indices of one input for one output, restricted to the given base rows.
inline void sobol_point(const Eigen::VectorXd& y, const SaltelliDesign& d, const std::vector<Eigen::Index>& rows,
                        std::size_t input, double& s1, double& st, bool& ok) {
    const auto a0 = static_cast<Eigen::Index>(d.a_offset());
    const auto b0 = static_cast<Eigen::Index>(d.b_offset());
    const auto ab0 = static_cast<Eigen::Index>(d.ab_offset(input));
    const auto ba0 = static_cast<Eigen::Index>(d.ba_offset(input));
    const double n = static_cast<double>(rows.size());
    double mean = 0.0;
    for (auto r : rows) mean += y(a0 + r) + y(b0 + r);
    mean /= 2.0 * n;
    double var = 0.0;
    double first_ab = 0.0, first_ba = 0.0, total_ab = 0.0, total_ba = 0.0;
    for (auto r : rows) {
        const double fa = y(a0 + r) - mean;
        const double fb = y(b0 + r) - mean;
        const double fab = y(ab0 + r) - mean;
        const double fba = y(ba0 + r) - mean;
        var += fa * fa + fb * fb;
        first_ab += fb * (fab - fa);
        first_ba += fa * (fba - fb);
        total_ab += (fa - fab) * (fa - fab);
        total_ba += (fb - fba) * (fb - fba);
    }
    var /= 2.0 * n;
    ok = var > 0.0;
    if (!ok) {
        s1 = st = 0.0;
        return;
    }
    s1 = 0.5 * (first_ab + first_ba) / n / var;
    st = 0.5 * (total_ab + total_ba) / n / (2.0 * var);
}

}  // namespace detail

/// Sobol' indices from evaluations aligned with the design rows (N_total x K).
inline SobolResult sobol_indices(const SaltelliDesign& design, const Eigen::MatrixXd& evaluations,
                                 std::size_t bootstrap_resamples = 200, std::uint64_t seed = 0) {
    if (static_cast<std::size_t>(evaluations.rows()) != design.total())
        throw SizeError("evaluations do not match the Saltelli design");
    if (!evaluations.allFinite()) throw DataError("Sobol' evaluations must be finite");
    const auto k = evaluations.cols();
    const auto d = static_cast<Eigen::Index>(design.dim);
    SobolResult res;
    res.n_base = design.n_base;
    res.s1 = Eigen::MatrixXd::Zero(d, k);
    res.st = Eigen::MatrixXd::Zero(d, k);
    res.s1_se = Eigen::MatrixXd::Zero(d, k);
    res.st_se = Eigen::MatrixXd::Zero(d, k);
    res.defined.assign(static_cast<std::size_t>(k), true);

    std::vector<Eigen::Index> all(design.n_base);
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<Eigen::Index>(i);

    std::vector<std::vector<Eigen::Index>> resamples(bootstrap_resamples, std::vector<Eigen::Index>(design.n_base));
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Eigen::Index> pick(0, static_cast<Eigen::Index>(design.n_base) - 1);
    for (auto& rs : resamples)
        for (auto& r : rs) r = pick(rng);

    for (Eigen::Index out = 0; out < k; ++out) {
        const Eigen::VectorXd y = evaluations.col(out);
        for (Eigen::Index i = 0; i < d; ++i) {
            bool ok = true;
            detail::sobol_point(y, design, all, static_cast<std::size_t>(i), res.s1(i, out), res.st(i, out), ok);
            if (!ok) {
                res.defined[static_cast<std::size_t>(out)] = false;
                continue;
            }
            if (bootstrap_resamples < 2) continue;
            double m1 = 0.0, q1 = 0.0, mt = 0.0, qt = 0.0;
            std::size_t used = 0;
            for (const auto& rs : resamples) {
                double s1 = 0.0, st = 0.0;
                bool rok = true;
                detail::sobol_point(y, design, rs, static_cast<std::size_t>(i), s1, st, rok);
                if (!rok) continue;
                m1 += s1;
                q1 += s1 * s1;
                mt += st;
                qt += st * st;
                ++used;
            }
            if (used > 1) {
                const double u = static_cast<double>(used);
                res.s1_se(i, out) = std::sqrt(std::max(0.0, (q1 - m1 * m1 / u) / (u - 1.0)));
                res.st_se(i, out) = std::sqrt(std::max(0.0, (qt - mt * mt / u) / (u - 1.0)));
            }
        }
    }
    return res;
}

}  // namespace snf::analysis
