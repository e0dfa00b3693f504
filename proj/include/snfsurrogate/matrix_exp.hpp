/**
 * @file matrix_exp.hpp
 * @brief Dense matrix exponential by Pade scaling and squaring.
 *
 * Follows Higham, "The scaling and squaring method for the matrix exponential
 * revisited" (SIAM J. Matrix Anal. Appl. 26, 2005): the lowest Pade degree in
 * {3,5,7,9,13} whose theta bound covers ||A||_1 is used directly, otherwise A is
 * scaled by 2^-s so that ||A/2^s||_1 <= theta_13 and the [13/13] approximant is
 * squared s times.
 */
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <span>

#include "snfsurrogate/errors.hpp"

namespace snf {

namespace detail {

inline double norm1(const Eigen::MatrixXd& a) {
    if (a.size() == 0) return 0.0;
    return a.cwiseAbs().colwise().sum().maxCoeff();
}

// Pade [m/m] for odd m <= 9 using the even/odd split U = A*sum(b_odd A^2k), V = sum(b_even A^2k).
inline Eigen::MatrixXd pade_low(const Eigen::MatrixXd& a, std::span<const double> b) {
    const auto n = a.rows();
    const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd a2 = a * a;
    Eigen::MatrixXd power = ident;
    Eigen::MatrixXd u_sum = b[1] * ident;
    Eigen::MatrixXd v = b[0] * ident;
    for (std::size_t k = 2; k < b.size(); k += 2) {
        power = power * a2;
        v += b[k] * power;
        if (k + 1 < b.size()) u_sum += b[k + 1] * power;
    }
    const Eigen::MatrixXd u = a * u_sum;
    return (v - u).partialPivLu().solve(v + u);
}

inline Eigen::MatrixXd pade13(const Eigen::MatrixXd& a) {
    static constexpr std::array<double, 14> b = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
        129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
        1323241920.0,        40840800.0,          960960.0,           16380.0,
        182.0,               1.0};
    const auto n = a.rows();
    const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd a2 = a * a;
    const Eigen::MatrixXd a4 = a2 * a2;
    const Eigen::MatrixXd a6 = a4 * a2;
    const Eigen::MatrixXd u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
    const Eigen::MatrixXd u =
        a * (u_inner + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident);
    const Eigen::MatrixXd v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                              b[4] * a4 + b[2] * a2 + b[0] * ident;
    return (v - u).partialPivLu().solve(v + u);
}

}  // namespace detail

/// exp(A) for a square, finite matrix. Throws DataError on non-finite entries.
inline Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) throw SizeError("matrix_exp: matrix must be square");
    if (!a.allFinite()) throw DataError("matrix_exp: non-finite matrix entry");

    static constexpr std::array<double, 4> b3 = {120.0, 60.0, 12.0, 1.0};
    static constexpr std::array<double, 6> b5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
    static constexpr std::array<double, 8> b7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                                 25200.0,    1512.0,    56.0,      1.0};
    static constexpr std::array<double, 10> b9 = {
        17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
        2162160.0,     110880.0,     3960.0,       90.0,        1.0};
    constexpr double theta3 = 1.495585217958292e-2;
    constexpr double theta5 = 2.539398330063230e-1;
    constexpr double theta7 = 9.504178996162932e-1;
    constexpr double theta9 = 2.097847961257068e0;
    constexpr double theta13 = 5.371920351148152e0;

    const double norm = detail::norm1(a);
    if (norm <= theta3) return detail::pade_low(a, b3);
    if (norm <= theta5) return detail::pade_low(a, b5);
    if (norm <= theta7) return detail::pade_low(a, b7);
    if (norm <= theta9) return detail::pade_low(a, b9);

    const int s = std::max(0, static_cast<int>(std::ceil(std::log2(norm / theta13))));
    Eigen::MatrixXd result = detail::pade13(a / std::ldexp(1.0, s));
    for (int i = 0; i < s; ++i) result = result * result;
    return result;
}

}  // namespace snf
