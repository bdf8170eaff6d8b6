// SPDX-License-Identifier: Apache-2.0
//
// jcas-pareto: joint communication and sensing beamforming library
// Copyright (c) 2026 the jcas-pareto authors

#ifndef JCAS_UNITS_HPP
#define JCAS_UNITS_HPP

#include <cmath>

namespace jcas {

// All internal powers and noise variances are linear milliwatts. dBm appears
// only at configuration boundaries; convert once on the way in and once on
// the way out.

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

} // namespace jcas

#endif
