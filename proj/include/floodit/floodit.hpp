#pragma once

#include "floodit/board.hpp"
#include "floodit/dp2xn.hpp"
#include "floodit/engine.hpp"
#include "floodit/error.hpp"
#include "floodit/oracle.hpp"
#include "floodit/reduction.hpp"
#include "floodit/verify.hpp"
