#pragma once

#include "rogap/bounds.hpp"
#include "rogap/bruteforce.hpp"
#include "rogap/checks.hpp"
#include "rogap/errors.hpp"
#include "rogap/exact.hpp"
#include "rogap/experiment.hpp"
#include "rogap/fractional_gap.hpp"
#include "rogap/generator_spec.hpp"
#include "rogap/generators.hpp"
#include "rogap/greedy.hpp"
#include "rogap/instance_io.hpp"
#include "rogap/item_set.hpp"
#include "rogap/matrix.hpp"
#include "rogap/model.hpp"
#include "rogap/monte_carlo.hpp"
#include "rogap/numeric.hpp"
#include "rogap/online_gap.hpp"
#include "rogap/online_knapsack.hpp"
#include "rogap/random.hpp"
#include "rogap/simplex.hpp"
#include "rogap/stats.hpp"
#include "rogap/suites.hpp"
#include "rogap/trace.hpp"
