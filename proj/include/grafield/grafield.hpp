#pragma once

// Umbrella header for the grafield library: orthonormal LP graph bases,
// LP graph transforms, correlation density fields, null-model diagnostics,
// random-graph generators and smooth graphon estimates.

#include "grafield/graph.hpp"
#include "grafield/lp_basis.hpp"
#include "grafield/lp_transform.hpp"
#include "grafield/density_field.hpp"
#include "grafield/diagnostics.hpp"
#include "grafield/generators.hpp"
#include "grafield/graphon.hpp"
#include "grafield/io.hpp"
#include "grafield/rng.hpp"
#include "grafield/stats.hpp"
