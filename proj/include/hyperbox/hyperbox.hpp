#ifndef HYPERBOX_HYPERBOX_HPP
#define HYPERBOX_HYPERBOX_HPP

#include "bounds_oracle.hpp"
#include "engine.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "io.hpp"
#include "metrics.hpp"
#include "problems.hpp"
#include "protocol.hpp"
#include "scalarization.hpp"
#include "search_region.hpp"

#endif  // HYPERBOX_HYPERBOX_HPP
