#pragma once

#include "quars/bitstream.hpp"
#include "quars/codecs.hpp"
#include "quars/container.hpp"
#include "quars/dataset_io.hpp"
#include "quars/error.hpp"
#include "quars/generators.hpp"
#include "quars/metrics.hpp"
#include "quars/transform.hpp"
