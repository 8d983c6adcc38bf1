#pragma once

#include "framekit/bspline.hpp"
#include "framekit/config.hpp"
#include "framekit/frame.hpp"
#include "framekit/gabor.hpp"
#include "framekit/json_io.hpp"
#include "framekit/policy.hpp"
#include "framekit/quadrature.hpp"
#include "framekit/verify.hpp"
#include "framekit/window.hpp"
