#ifndef KELAYER_KELAYER_HPP
#define KELAYER_KELAYER_HPP

#include "kelayer/exact_oracle.hpp"
#include "kelayer/experiment.hpp"
#include "kelayer/generators.hpp"
#include "kelayer/graph.hpp"
#include "kelayer/graph_io.hpp"
#include "kelayer/ke_verify.hpp"
#include "kelayer/layer_decomp.hpp"
#include "kelayer/matching.hpp"
#include "kelayer/rng.hpp"

#endif  // KELAYER_KELAYER_HPP
