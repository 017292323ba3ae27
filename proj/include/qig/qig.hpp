#pragma once

#include "qig/channels.hpp"
#include "qig/divergences.hpp"
#include "qig/errors.hpp"
#include "qig/extraction.hpp"
#include "qig/geodesics.hpp"
#include "qig/identifications.hpp"
#include "qig/json_io.hpp"
#include "qig/matcore.hpp"
#include "qig/metrics.hpp"
#include "qig/states.hpp"
#include "qig/verify.hpp"
