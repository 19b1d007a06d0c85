#pragma once

#include "geonorm/angle.hpp"
#include "geonorm/errors.hpp"
#include "geonorm/estimation.hpp"
#include "geonorm/geodesic_normal.hpp"
#include "geonorm/quadrature.hpp"
#include "geonorm/rng.hpp"
#include "geonorm/special.hpp"
#include "geonorm/von_mises.hpp"
