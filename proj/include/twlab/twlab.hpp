#pragma once

#include "twlab/composition.hpp"
#include "twlab/ef_builder.hpp"
#include "twlab/error.hpp"
#include "twlab/graph.hpp"
#include "twlab/io.hpp"
#include "twlab/lp.hpp"
#include "twlab/minor.hpp"
#include "twlab/pipeline.hpp"
#include "twlab/po_instance.hpp"
#include "twlab/polynomial.hpp"
#include "twlab/polytope.hpp"
#include "twlab/random.hpp"
#include "twlab/random_graph.hpp"
#include "twlab/rational.hpp"
#include "twlab/reductions.hpp"
#include "twlab/slack.hpp"
#include "twlab/small_rational.hpp"
#include "twlab/treewidth.hpp"
