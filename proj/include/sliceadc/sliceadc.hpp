#pragma once
// Umbrella header.

#include <sliceadc/sigkit.hpp>
#include <sliceadc/noise.hpp>
#include <sliceadc/optics.hpp>
#include <sliceadc/digitizer.hpp>
#include <sliceadc/dsp.hpp>
#include <sliceadc/analysis.hpp>
#include <sliceadc/config.hpp>
#include <sliceadc/report.hpp>
#include <sliceadc/svg.hpp>
