#pragma once

#include "qclab/beltrami.hpp"
#include "qclab/boxcount.hpp"
#include "qclab/branch.hpp"
#include "qclab/burkholder.hpp"
#include "qclab/cantor.hpp"
#include "qclab/grid.hpp"
#include "qclab/model_map.hpp"
#include "qclab/quadrature.hpp"
#include "qclab/region.hpp"
#include "qclab/spectra.hpp"
#include "qclab/util.hpp"
