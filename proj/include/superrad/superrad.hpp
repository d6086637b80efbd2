#pragma once

#include "superrad/config.hpp"
#include "superrad/csv.hpp"
#include "superrad/decay.hpp"
#include "superrad/dicke.hpp"
#include "superrad/electron.hpp"
#include "superrad/error.hpp"
#include "superrad/expm.hpp"
#include "superrad/fit.hpp"
#include "superrad/oracle.hpp"
#include "superrad/pipeline.hpp"
#include "superrad/scattering.hpp"
#include "superrad/validation.hpp"
