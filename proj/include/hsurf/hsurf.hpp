#pragma once

#include "taylor_jet.hpp"
#include "expr.hpp"
#include "quadrature.hpp"
#include "real_jet.hpp"
#include "field.hpp"
#include "geometry.hpp"
#include "verify.hpp"
#include "rotational.hpp"
#include "mesh.hpp"
