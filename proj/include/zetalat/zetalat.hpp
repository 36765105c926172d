#pragma once

#include "zetalat/cuboid.hpp"
#include "zetalat/derivatives.hpp"
#include "zetalat/engine.hpp"
#include "zetalat/errors.hpp"
#include "zetalat/lattice.hpp"
#include "zetalat/multiindex.hpp"
#include "zetalat/oracle.hpp"
#include "zetalat/parallel.hpp"
#include "zetalat/set_zeta.hpp"
#include "zetalat/special/bessel.hpp"
#include "zetalat/special/crandall.hpp"
#include "zetalat/special/gamma.hpp"
#include "zetalat/special/zeta.hpp"
#include "zetalat/summand.hpp"
#include "zetalat/vec.hpp"
