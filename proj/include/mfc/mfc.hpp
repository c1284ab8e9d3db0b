#pragma once

#include "mfc/alns.hpp"
#include "mfc/errors.hpp"
#include "mfc/evaluation.hpp"
#include "mfc/exact.hpp"
#include "mfc/generator.hpp"
#include "mfc/io.hpp"
#include "mfc/lp.hpp"
#include "mfc/model.hpp"
#include "mfc/solution.hpp"
