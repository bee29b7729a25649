#pragma once

#include "tunegraph/assortativity.hpp"
#include "tunegraph/errors.hpp"
#include "tunegraph/generators.hpp"
#include "tunegraph/graph.hpp"
#include "tunegraph/io.hpp"
#include "tunegraph/joint.hpp"
#include "tunegraph/model.hpp"
#include "tunegraph/report.hpp"
#include "tunegraph/rng.hpp"
#include "tunegraph/stats.hpp"
#include "tunegraph/theory.hpp"
