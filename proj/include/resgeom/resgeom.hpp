#pragma once

#include "resgeom/errors.hpp"
#include "resgeom/linalg.hpp"
#include "resgeom/graph.hpp"
#include "resgeom/resistance.hpp"
#include "resgeom/simplex.hpp"
#include "resgeom/schur.hpp"
