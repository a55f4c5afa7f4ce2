#pragma once

// Umbrella header for the whole library.

#include "tabpipe/csv.hpp"
#include "tabpipe/filter_expr.hpp"
#include "tabpipe/frame.hpp"
#include "tabpipe/kmeans.hpp"
#include "tabpipe/levenshtein.hpp"
#include "tabpipe/pipeline.hpp"
#include "tabpipe/plot.hpp"
#include "tabpipe/sql.hpp"
#include "tabpipe/stats.hpp"
