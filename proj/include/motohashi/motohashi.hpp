#pragma once

// Umbrella header for the whole library.

#include "errors.hpp"
#include "special.hpp"
#include "zero_table.hpp"
#include "zeta.hpp"
#include "arithmetic.hpp"
#include "singularity.hpp"
#include "product.hpp"
#include "parallel.hpp"
#include "argument_principle.hpp"
#include "k_structure.hpp"
#include "explicit_formula.hpp"
#include "density.hpp"
#include "io.hpp"
#include "cache.hpp"
#include "cli.hpp"
