#pragma once

#include "sisi/conjugacy.hpp"
#include "sisi/dynamics.hpp"
#include "sisi/error.hpp"
#include "sisi/fixpoints.hpp"
#include "sisi/format.hpp"
#include "sisi/model.hpp"
#include "sisi/presets.hpp"
#include "sisi/stability.hpp"
#include "sisi/tensor.hpp"
#include "sisi/io.hpp"
