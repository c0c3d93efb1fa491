#pragma once

#include "densops/rational.hpp"
#include "densops/error.hpp"
#include "densops/expr.hpp"
#include "densops/simplify.hpp"
#include "densops/ratfun.hpp"
#include "densops/calculus.hpp"
#include "densops/equality.hpp"
#include "densops/parser.hpp"
#include "densops/densop.hpp"
#include "densops/op_dsl.hpp"
#include "densops/riccati.hpp"
#include "densops/sturm.hpp"
#include "densops/coords.hpp"
#include "densops/duval.hpp"
