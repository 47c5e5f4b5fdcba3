// qrabi.hpp: umbrella include.
#pragma once

#include "errors.hpp"
#include "heun.hpp"
#include "judd.hpp"
#include "oracle.hpp"
#include "rabi.hpp"
#include "spectrum.hpp"
