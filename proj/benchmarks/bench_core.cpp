#include <benchmark/benchmark.h>

#include <jcas/oracle.hpp>
#include <jcas/solver_multiuser.hpp>
#include <jcas/solver_singleuser.hpp>

using namespace jcas;

namespace {

ChannelSet channels(int k, int nt) {
    ChannelConfig cfg;
    cfg.n_users = k;
    cfg.n_paths = 6;
    cfg.rng_seed = 1;
    return generate_channels(cfg, ArrayConfig(nt, nt, 0.5));
}

SensingOperators ops_for(int nt) {
    return build_operators(ArrayConfig(nt, nt, 0.5), Target(0.0, cx(1, 0), 1.0));
}

void BM_BuildOperators(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const ArrayConfig cfg(n, n, 0.5);
    const Target tgt(0.3, cx(0.8, 0.2), 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(build_operators(cfg, tgt));
}
BENCHMARK(BM_BuildOperators)->Arg(10)->Arg(20);

void BM_GenerateChannels(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    ChannelConfig cfg;
    cfg.n_users = k;
    cfg.n_paths = 6;
    const ArrayConfig array(10, 10, 0.5);
    for (auto _ : state) {
        cfg.rng_seed++;
        benchmark::DoNotOptimize(generate_channels(cfg, array));
    }
}
BENCHMARK(BM_GenerateChannels)->Arg(4)->Arg(8);

void BM_MacToBc(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const ChannelSet cs = channels(k, 10);
    UplinkSolution up;
    up.order = UplinkSolution::identity_order(k);
    up.q.assign(static_cast<std::size_t>(k), 1000.0 / k);
    for (auto _ : state) benchmark::DoNotOptimize(mac_to_bc(cs, up));
}
BENCHMARK(BM_MacToBc)->Arg(4)->Arg(8);

void BM_SolveMultiuser(benchmark::State& state) {
    const int k = static_cast<int>(state.range(0));
    const MultiuserProblem problem(channels(k, 10), ops_for(10), 1000.0, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(solve_multiuser(problem));
}
BENCHMARK(BM_SolveMultiuser)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_PgdSolve(benchmark::State& state) {
    const ChannelSet cs = channels(1, 4);
    const SingleUserProblem problem(cs.h[0], cs.sigma_c2, ops_for(4), 1000.0, 600.0, 0.5);
    for (auto _ : state) benchmark::DoNotOptimize(pgd_solve(problem));
}
BENCHMARK(BM_PgdSolve)->Unit(benchmark::kMillisecond);

void BM_ProjectSpectrum(benchmark::State& state) {
    Eigen::VectorXd sigma(16);
    for (int i = 0; i < 16; ++i) sigma(i) = std::sin(i * 0.7) + 1.0;
    for (auto _ : state) benchmark::DoNotOptimize(project_spectrum(sigma, 4.0, 0.6));
}
BENCHMARK(BM_ProjectSpectrum);

void BM_McFisher(benchmark::State& state) {
    const ArrayConfig array(2, 2, 0.5);
    const Target tgt(0.4, cx(0.8, 0.3), 1.0);
    const CMatrix r = CMatrix::Identity(2, 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(oracle::mc_fisher(array, tgt, r, state.range(0), 1));
}
BENCHMARK(BM_McFisher)->Arg(10000)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
