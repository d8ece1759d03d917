#pragma once

#include "subcell/aeros.hpp"
#include "subcell/distance.hpp"
#include "subcell/elvira.hpp"
#include "subcell/fvs.hpp"
#include "subcell/geom.hpp"
#include "subcell/grid.hpp"
#include "subcell/io.hpp"
#include "subcell/models.hpp"
#include "subcell/obera.hpp"
#include "subcell/orient.hpp"
#include "subcell/parallel.hpp"
#include "subcell/pipeline.hpp"
#include "subcell/polyroots.hpp"
#include "subcell/recon.hpp"
#include "subcell/shapes.hpp"
#include "subcell/vertex.hpp"
