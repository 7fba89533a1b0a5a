#pragma once

#include "ecml/error.hpp"
#include "ecml/graph.hpp"
#include "ecml/decomposition.hpp"
#include "ecml/recognizable_set.hpp"
#include "ecml/formula.hpp"
#include "ecml/arith.hpp"
#include "ecml/problem.hpp"
#include "ecml/count.hpp"
#include "ecml/cut_count.hpp"
#include "ecml/oracle.hpp"
#include "ecml/catalogue.hpp"
#include "ecml/hardness.hpp"
