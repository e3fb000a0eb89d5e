#pragma once

#include "striped/atlas_io.hpp"
#include "striped/autgroup.hpp"
#include "striped/core.hpp"
#include "striped/geometry.hpp"
#include "striped/graph.hpp"
#include "striped/rational.hpp"
#include "striped/reduce.hpp"
#include "striped/svg.hpp"
