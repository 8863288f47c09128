#pragma once

#include "morrey/cli.hpp"
#include "morrey/curves.hpp"
#include "morrey/error.hpp"
#include "morrey/experiments.hpp"
#include "morrey/morrey_norm.hpp"
#include "morrey/numerics.hpp"
#include "morrey/operators.hpp"
#include "morrey/report_io.hpp"
#include "morrey/weights.hpp"
