#pragma once

#include "certify/assumption.hpp"
#include "certify/cusp.hpp"
#include "core/error.hpp"
#include "core/jet.hpp"
#include "core/quadrature.hpp"
#include "core/vec.hpp"
#include "extend/compose.hpp"
#include "extend/extension.hpp"
#include "extend/lipschitz.hpp"
#include "extend/locality.hpp"
#include "extend/norms.hpp"
#include "extend/partition.hpp"
#include "extend/testfn.hpp"
#include "geometry/builtins.hpp"
#include "geometry/domain.hpp"
#include "geometry/domain_file.hpp"
#include "geometry/oracles.hpp"
#include "geometry/sampled.hpp"
#include "harness/acceptance.hpp"
#include "harness/goldens.hpp"
#include "polyfit/polyfit.hpp"
#include "qhmetric/chains.hpp"
#include "qhmetric/qh_graph.hpp"
#include "reflect/chains.hpp"
#include "reflect/classify.hpp"
#include "version.hpp"
#include "whitney/decomposition.hpp"
#include "whitney/dyadic_cube.hpp"
#include "whitney/io.hpp"
