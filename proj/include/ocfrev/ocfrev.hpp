#pragma once

#include "descriptor.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "logic.hpp"
#include "oracle.hpp"
#include "parser.hpp"
#include "pcp.hpp"
#include "ranking.hpp"
#include "revision.hpp"
