#pragma once

// Umbrella header: graph-spectral two-class classification pipeline.

#include "gsc/atlas.hpp"
#include "gsc/config.hpp"
#include "gsc/dataset.hpp"
#include "gsc/errors.hpp"
#include "gsc/eval.hpp"
#include "gsc/features.hpp"
#include "gsc/fkt.hpp"
#include "gsc/gft.hpp"
#include "gsc/graph.hpp"
#include "gsc/io.hpp"
#include "gsc/log.hpp"
#include "gsc/phenotype.hpp"
#include "gsc/report.hpp"
#include "gsc/rng.hpp"
#include "gsc/spectra.hpp"
#include "gsc/stats.hpp"
#include "gsc/synth.hpp"
#include "gsc/tree.hpp"
