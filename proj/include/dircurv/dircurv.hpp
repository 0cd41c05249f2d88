#pragma once

#include "dircurv/error.hpp"
#include "dircurv/expr.hpp"
#include "dircurv/linalg.hpp"
#include "dircurv/body.hpp"
#include "dircurv/curvature.hpp"
#include "dircurv/goldman.hpp"
#include "dircurv/oracle.hpp"
