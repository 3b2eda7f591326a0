#pragma once

#include "mtvar/error.hpp"
#include "mtvar/expr.hpp"
#include "mtvar/grid.hpp"
#include "mtvar/functional.hpp"
#include "mtvar/problem.hpp"
#include "mtvar/problem_file.hpp"
#include "mtvar/conditions.hpp"
#include "mtvar/fractional.hpp"
#include "mtvar/invexity.hpp"
#include "mtvar/solver.hpp"
