// scsim.hpp -- umbrella header for the whole simulator.

#pragma once

#include "analog_chain.hpp"
#include "config.hpp"
#include "energy_model.hpp"
#include "job_io.hpp"
#include "mac_engine.hpp"
#include "sc_codec.hpp"
#include "sweep.hpp"
#include "verify.hpp"
