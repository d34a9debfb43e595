#pragma once

/// Umbrella header for the whole toolkit.

#include "gevrey/errors.hpp"
#include "gevrey/summation.hpp"
#include "gevrey/grid.hpp"
#include "gevrey/field.hpp"
#include "gevrey/weights.hpp"
#include "gevrey/spectral_ops.hpp"
#include "gevrey/field_io.hpp"
#include "gevrey/initial_data.hpp"
#include "gevrey/convolution.hpp"
#include "gevrey/pseudo_spectral.hpp"
#include "gevrey/solver.hpp"
#include "gevrey/diagnostics.hpp"
#include "gevrey/bounds.hpp"
#include "gevrey/comparison_ode.hpp"
#include "gevrey/experiment.hpp"
