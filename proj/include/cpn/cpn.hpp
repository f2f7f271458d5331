#pragma once

#include "errors.hpp"
#include "geometry.hpp"
#include "jet.hpp"
#include "ladder.hpp"
#include "matrix_jet.hpp"
#include "quadrature.hpp"
#include "reports.hpp"
#include "seeds.hpp"
#include "spectral.hpp"
#include "surfaces.hpp"
