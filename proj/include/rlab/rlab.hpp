#pragma once

#include "rlab/errors.hpp"
#include "rlab/formulas.hpp"
#include "rlab/generator.hpp"
#include "rlab/geometry.hpp"
#include "rlab/grid.hpp"
#include "rlab/io.hpp"
#include "rlab/ode.hpp"
#include "rlab/parallel.hpp"
#include "rlab/report.hpp"
#include "rlab/resolvent.hpp"
#include "rlab/semigroup.hpp"
#include "rlab/suite.hpp"
