#pragma once

// Umbrella header for the full library.

#include "shapevis/bench.hpp"
#include "shapevis/community.hpp"
#include "shapevis/io.hpp"
#include "shapevis/knn.hpp"
#include "shapevis/metrics.hpp"
#include "shapevis/parallel.hpp"
#include "shapevis/pipeline.hpp"
#include "shapevis/rng.hpp"
#include "shapevis/synth.hpp"
#include "shapevis/tearing.hpp"
#include "shapevis/types.hpp"
#include "shapevis/walks.hpp"
#include "shapevis/witness.hpp"
