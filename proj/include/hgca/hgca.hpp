#pragma once

// Umbrella header: welfare maximization and truthful mechanisms for
// hypergraph valuations.

#include "hgca/baker.hpp"
#include "hgca/chromatic.hpp"
#include "hgca/column_generation.hpp"
#include "hgca/demand.hpp"
#include "hgca/deviation.hpp"
#include "hgca/exact.hpp"
#include "hgca/io.hpp"
#include "hgca/lp.hpp"
#include "hgca/lp_rounding.hpp"
#include "hgca/midr.hpp"
#include "hgca/rational.hpp"
#include "hgca/rng.hpp"
#include "hgca/simplex.hpp"
#include "hgca/tree_decomposition.hpp"
#include "hgca/valuation.hpp"
#include "hgca/vcg.hpp"
