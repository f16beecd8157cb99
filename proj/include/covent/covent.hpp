#pragma once

#include "covent/error.hpp"
#include "covent/matrix.hpp"
#include "covent/states.hpp"
#include "covent/observables.hpp"
#include "covent/criterion.hpp"
#include "covent/uncertainty.hpp"
#include "covent/reference.hpp"
#include "covent/correlation_io.hpp"
#include "covent/sweep.hpp"
#include "covent/battery.hpp"
