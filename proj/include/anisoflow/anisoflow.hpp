#pragma once

// Umbrella header for the anisoflow library.

#include "anisoflow/image.hpp"
#include "anisoflow/gauss1d.hpp"
#include "anisoflow/decomp.hpp"
#include "anisoflow/interp.hpp"
#include "anisoflow/parallel.hpp"
#include "anisoflow/io.hpp"
#include "anisoflow/anisofilter.hpp"
#include "anisoflow/orientation.hpp"
#include "anisoflow/synthbench.hpp"
#include "anisoflow/segment.hpp"
