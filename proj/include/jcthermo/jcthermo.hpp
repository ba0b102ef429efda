// jcthermo.hpp: umbrella header

#pragma once

#include "jcthermo/bath.hpp"
#include "jcthermo/diagnostics.hpp"
#include "jcthermo/eigensystem.hpp"
#include "jcthermo/errors.hpp"
#include "jcthermo/negativity.hpp"
#include "jcthermo/rate_graph.hpp"
#include "jcthermo/root_finding.hpp"
#include "jcthermo/version.hpp"
