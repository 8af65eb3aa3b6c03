#pragma once

#include "ssnm/bounds.hpp"
#include "ssnm/core.hpp"
#include "ssnm/csv.hpp"
#include "ssnm/error.hpp"
#include "ssnm/estimators.hpp"
#include "ssnm/experiment.hpp"
#include "ssnm/linalg.hpp"
#include "ssnm/montecarlo.hpp"
#include "ssnm/quadrature.hpp"
#include "ssnm/svg.hpp"
#include "ssnm/table.hpp"
