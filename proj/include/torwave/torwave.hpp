#pragma once

#include "torwave/equidist.hpp"
#include "torwave/errors.hpp"
#include "torwave/experiments.hpp"
#include "torwave/fourier.hpp"
#include "torwave/gaussian.hpp"
#include "torwave/grid.hpp"
#include "torwave/lattice.hpp"
#include "torwave/nodal.hpp"
#include "torwave/relations.hpp"
#include "torwave/rng.hpp"
#include "torwave/svg.hpp"
#include "torwave/synthesis.hpp"
#include "torwave/window.hpp"
