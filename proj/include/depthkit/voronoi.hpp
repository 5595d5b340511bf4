#pragma once

#include "depthkit/voronoi/coefficients.hpp"
#include "depthkit/voronoi/gl2.hpp"
#include "depthkit/voronoi/gl3.hpp"
