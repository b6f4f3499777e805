#pragma once

#include "gyrostat/algebra.hpp"
#include "gyrostat/dynamics.hpp"
#include "gyrostat/error.hpp"
#include "gyrostat/hj.hpp"
#include "gyrostat/model.hpp"
#include "gyrostat/poisson.hpp"
