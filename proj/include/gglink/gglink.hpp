#pragma once

// Umbrella header for the whole library.

#include "gglink/checkpoint.hpp"
#include "gglink/decoder.hpp"
#include "gglink/encoder.hpp"
#include "gglink/errors.hpp"
#include "gglink/graph.hpp"
#include "gglink/graph_io.hpp"
#include "gglink/harness.hpp"
#include "gglink/json_util.hpp"
#include "gglink/matrix.hpp"
#include "gglink/metrics.hpp"
#include "gglink/report_io.hpp"
#include "gglink/rng.hpp"
#include "gglink/sampling.hpp"
#include "gglink/split_io.hpp"
#include "gglink/training.hpp"
#include "gglink/version.hpp"
