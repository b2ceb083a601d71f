#pragma once

#include "hsgd/core/errors.hpp"
#include "hsgd/core/param_vector.hpp"
#include "hsgd/core/rng.hpp"
#include "hsgd/data/datasets.hpp"
#include "hsgd/diagnostics/estimators.hpp"
#include "hsgd/optim/hsgd.hpp"
#include "hsgd/optim/schedule.hpp"
#include "hsgd/optim/sgd.hpp"
#include "hsgd/optim/trace.hpp"
#include "hsgd/problems/cubic_logistic.hpp"
#include "hsgd/problems/erf_regression.hpp"
#include "hsgd/problems/linear_quadratic.hpp"
#include "hsgd/problems/mlp_regression.hpp"
#include "hsgd/problems/problem.hpp"
#include "hsgd/theory/bounds.hpp"
#include "hsgd/theory/report.hpp"
