#pragma once

#include "cornersol/cutoff.hpp"
#include "cornersol/errors.hpp"
#include "cornersol/exponents.hpp"
#include "cornersol/fem.hpp"
#include "cornersol/geometry.hpp"
#include "cornersol/io.hpp"
#include "cornersol/laplace.hpp"
#include "cornersol/pairing.hpp"
#include "cornersol/quadrature.hpp"
#include "cornersol/stokes.hpp"
