#pragma once

#include "boundary.hpp"
#include "config.hpp"
#include "error.hpp"
#include "experiments.hpp"
#include "io.hpp"
#include "kernels.hpp"
#include "metrics.hpp"
#include "operators.hpp"
#include "phantom.hpp"
#include "volume.hpp"
#include "wavelet.hpp"
