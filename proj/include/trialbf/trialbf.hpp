#pragma once

// Umbrella header: Bayes factor evidence analysis from published trial
// summary statistics.

#include "trialbf/batch.hpp"
#include "trialbf/bayes_factor.hpp"
#include "trialbf/effect.hpp"
#include "trialbf/errors.hpp"
#include "trialbf/evidence.hpp"
#include "trialbf/exports.hpp"
#include "trialbf/normal.hpp"
#include "trialbf/prior.hpp"
#include "trialbf/quadrature.hpp"
#include "trialbf/report.hpp"
#include "trialbf/reverse_bayes.hpp"
#include "trialbf/sensitivity.hpp"
#include "trialbf/svg.hpp"
