#pragma once

#include "qgeom/config.hpp"
#include "qgeom/matrix.hpp"
#include "qgeom/states.hpp"
#include "qgeom/state_io.hpp"
#include "qgeom/entanglement.hpp"
#include "qgeom/info_geometry.hpp"
#include "qgeom/relations.hpp"
