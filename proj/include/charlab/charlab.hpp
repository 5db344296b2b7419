#pragma once

// Umbrella header for the whole library.
#include "charlab/dist.hpp"
#include "charlab/error.hpp"
#include "charlab/feq.hpp"
#include "charlab/fourier.hpp"
#include "charlab/group.hpp"
#include "charlab/harness.hpp"
#include "charlab/hom.hpp"
#include "charlab/intlin.hpp"
#include "charlab/jsonio.hpp"
#include "charlab/rational.hpp"
