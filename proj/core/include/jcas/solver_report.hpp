// SPDX-License-Identifier: Apache-2.0
//
// jcas-pareto: joint communication and sensing beamforming library
// Copyright (c) 2026 the jcas-pareto authors

#ifndef JCAS_SOLVER_REPORT_HPP
#define JCAS_SOLVER_REPORT_HPP

#include <vector>

namespace jcas {

struct SolverReport {
    int outer_iterations = 0;
    int beta_bisections = 0;
    bool converged = false;
    double final_objective = 0.0;
    std::vector<double> objective_trace;
};

} // namespace jcas

#endif
