#pragma once

// Umbrella header.

#include "algebra.hpp"
#include "cli.hpp"
#include "cochain.hpp"
#include "core.hpp"
#include "expm.hpp"
#include "frame.hpp"
#include "group.hpp"
#include "json_io.hpp"
#include "modules.hpp"
#include "pbw.hpp"
#include "quadrature.hpp"
#include "report.hpp"
#include "semigroup.hpp"
