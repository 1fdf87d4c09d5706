#pragma once

#include "lpdo/errors.hpp"
#include "lpdo/expr.hpp"
#include "lpdo/lattice.hpp"
#include "lpdo/symbol.hpp"
#include "lpdo/quantize.hpp"
#include "lpdo/sobolev.hpp"
#include "lpdo/elliptic.hpp"
#include "lpdo/fredholm.hpp"
#include "lpdo/io.hpp"
#include "lpdo/verify.hpp"
