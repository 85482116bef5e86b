#pragma once

// Umbrella header.

#include "ptlab/bipartite.hpp"
#include "ptlab/ensembles.hpp"
#include "ptlab/experiments.hpp"
#include "ptlab/geometry.hpp"
#include "ptlab/io.hpp"
#include "ptlab/laws.hpp"
#include "ptlab/parallel.hpp"
#include "ptlab/rng.hpp"
#include "ptlab/spectra.hpp"
#include "ptlab/types.hpp"
