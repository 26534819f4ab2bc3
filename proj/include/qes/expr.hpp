#pragma once

#include "qes/derivative.hpp"
#include "qes/expression.hpp"
#include "qes/parse.hpp"
