#pragma once

#include "tomolab/analysis.hpp"
#include "tomolab/markers.hpp"
#include "tomolab/moments.hpp"
#include "tomolab/special_functions.hpp"
#include "tomolab/states.hpp"
#include "tomolab/tomogram.hpp"
