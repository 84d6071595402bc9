#pragma once

#include "dnev/error.hpp"
#include "dnev/exact.hpp"
#include "dnev/upoly.hpp"
#include "dnev/ratfun.hpp"
#include "dnev/diffpoly.hpp"
#include "dnev/eqparse.hpp"
#include "dnev/profile.hpp"
#include "dnev/poleprop.hpp"
#include "dnev/clunie.hpp"
#include "dnev/roots.hpp"
#include "dnev/quadrature.hpp"
#include "dnev/models.hpp"
#include "dnev/growth.hpp"
#include "dnev/charfn.hpp"
#include "dnev/modelspec.hpp"
