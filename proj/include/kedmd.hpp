#ifndef KEDMD_HPP
#define KEDMD_HPP

#include "kedmd/error.hpp"
#include "kedmd/spectral.hpp"
#include "kedmd/quadrature.hpp"
#include "kedmd/maps.hpp"
#include "kedmd/observables.hpp"
#include "kedmd/edmd.hpp"
#include "kedmd/transfer.hpp"
#include "kedmd/bench/config.hpp"
#include "kedmd/bench/analysis.hpp"
#include "kedmd/bench/sweep.hpp"
#include "kedmd/bench/figures.hpp"
#include "kedmd/bench/report.hpp"

#endif  // KEDMD_HPP
