#pragma once

// Umbrella header.

#include "dgclust/eigen.hpp"
#include "dgclust/error.hpp"
#include "dgclust/eval.hpp"
#include "dgclust/export.hpp"
#include "dgclust/graph.hpp"
#include "dgclust/graph_io.hpp"
#include "dgclust/kmeans.hpp"
#include "dgclust/leiden.hpp"
#include "dgclust/markov.hpp"
#include "dgclust/matrix.hpp"
#include "dgclust/partition.hpp"
#include "dgclust/pipeline.hpp"
#include "dgclust/random.hpp"
#include "dgclust/spectral.hpp"
#include "dgclust/svd.hpp"
#include "dgclust/synth.hpp"
#include "dgclust/trips_csv.hpp"
#include "dgclust/walktrap.hpp"

namespace dgclust {
inline constexpr const char* kVersion = "0.1.0";
}
