#pragma once

#include "cldg/analytic.hpp"
#include "cldg/cldg_operator.hpp"
#include "cldg/dg_field.hpp"
#include "cldg/diagnostics.hpp"
#include "cldg/legendre.hpp"
#include "cldg/mesh.hpp"
#include "cldg/projections.hpp"
#include "cldg/time_integration.hpp"
#include "cldg/types.hpp"
