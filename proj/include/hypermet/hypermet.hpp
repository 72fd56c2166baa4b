#ifndef HYPERMET_HYPERMET_HPP
#define HYPERMET_HYPERMET_HPP

#include "hypermet/boundary_metric.hpp"
#include "hypermet/errors.hpp"
#include "hypermet/four_point.hpp"
#include "hypermet/io.hpp"
#include "hypermet/manifest.hpp"
#include "hypermet/metric_core.hpp"
#include "hypermet/model_spaces.hpp"
#include "hypermet/parallel.hpp"
#include "hypermet/sharpness.hpp"
#include "hypermet/version.hpp"

#endif  // HYPERMET_HYPERMET_HPP
