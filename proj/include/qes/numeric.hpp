#pragma once

#include "qes/numeric/diagnostics.hpp"
#include "qes/numeric/eigen.hpp"
#include "qes/numeric/grid.hpp"
#include "qes/numeric/quadrature.hpp"
#include "qes/numeric/roots.hpp"
