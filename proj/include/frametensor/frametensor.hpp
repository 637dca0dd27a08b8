#pragma once

#include "frametensor/algebra.hpp"
#include "frametensor/core.hpp"
#include "frametensor/frame.hpp"
#include "frametensor/io.hpp"
#include "frametensor/lattice.hpp"
#include "frametensor/random.hpp"
#include "frametensor/tensor4.hpp"
#include "frametensor/verify.hpp"
