#pragma once

#include "dimer/errors.hpp"
#include "dimer/lattice.hpp"
#include "dimer/torus_graph.hpp"
#include "dimer/io.hpp"
#include "dimer/matchings.hpp"
#include "dimer/zigzag.hpp"
#include "dimer/quiver.hpp"
#include "dimer/cancel.hpp"
#include "dimer/generate.hpp"
#include "dimer/census.hpp"
#include "dimer/output.hpp"
#include "dimer/render.hpp"
