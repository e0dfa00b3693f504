/**
 * @file snfsurrogate.hpp
 * @brief Umbrella header for the decay-heat surrogate library.
 */
#pragma once

#include "snfsurrogate/bench.hpp"
#include "snfsurrogate/dataset.hpp"
#include "snfsurrogate/errors.hpp"
#include "snfsurrogate/evaluators.hpp"
#include "snfsurrogate/history.hpp"
#include "snfsurrogate/io.hpp"
#include "snfsurrogate/matrix_exp.hpp"
#include "snfsurrogate/mlp.hpp"
#include "snfsurrogate/nuclide_chain.hpp"
#include "snfsurrogate/oracle.hpp"
#include "snfsurrogate/parallel.hpp"
#include "snfsurrogate/seeding.hpp"
#include "snfsurrogate/sobol.hpp"
#include "snfsurrogate/train.hpp"
#include "snfsurrogate/tuner.hpp"
#include "snfsurrogate/uq.hpp"
