#pragma once

#include "transrad/errors.hpp"
#include "transrad/opcore.hpp"
#include "transrad/deviation.hpp"
#include "transrad/radii.hpp"
#include "transrad/translation.hpp"
#include "transrad/stationary.hpp"
#include "transrad/states.hpp"
#include "transrad/georange.hpp"
