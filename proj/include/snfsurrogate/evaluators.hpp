/**
 * @file evaluators.hpp
 * @brief Oracle and surrogate wrapped as batch evaluators for UQ and SA.
 */
#pragma once

#include "snfsurrogate/dataset.hpp"
#include "snfsurrogate/mlp.hpp"
#include "snfsurrogate/oracle.hpp"
#include "snfsurrogate/parallel.hpp"
#include "snfsurrogate/uq.hpp"

namespace snf::analysis {

/// Runs the oracle on every row; rows are independent and evaluated in parallel.
inline Evaluator oracle_evaluator(const oracle::Oracle& model, std::size_t workers = worker_count()) {
    return [&model, workers](const Eigen::MatrixXd& x) { return dataset::label(x, model, workers); };
}

inline Evaluator surrogate_evaluator(const surrogate::MlpModel& model) {
    return [&model](const Eigen::MatrixXd& x) { return surrogate::predict(model, x); };
}

}  // namespace snf::analysis
