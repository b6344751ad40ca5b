#pragma once

#include "mwc/aggregation.hpp"
#include "mwc/bipartite.hpp"
#include "mwc/covering.hpp"
#include "mwc/error.hpp"
#include "mwc/exact_oracle.hpp"
#include "mwc/generators.hpp"
#include "mwc/graph.hpp"
#include "mwc/io.hpp"
#include "mwc/max_flow.hpp"
#include "mwc/norms.hpp"
#include "mwc/pipeline.hpp"
#include "mwc/reduction.hpp"
#include "mwc/report.hpp"
#include "mwc/uncrossing.hpp"
#include "mwc/utc.hpp"
