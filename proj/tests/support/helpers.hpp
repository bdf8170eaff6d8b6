#ifndef JCAS_TEST_HELPERS_HPP
#define JCAS_TEST_HELPERS_HPP

#include <jcas/channel_model.hpp>
#include <jcas/rng.hpp>

namespace jcas_test {

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

inline jcas::CVector random_cvector(jcas::SplitMix64& gen, int n) {
    jcas::CVector v(n);
    for (int i = 0; i < n; ++i) v(i) = gen.next_complex_normal();
    return v;
}

inline jcas::CMatrix random_hermitian(jcas::SplitMix64& gen, int n) {
    jcas::CMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = gen.next_complex_normal();
    return 0.5 * (m + m.adjoint());
}

inline jcas::CMatrix random_psd(jcas::SplitMix64& gen, int n, int rank = -1) {
    const int r = rank > 0 ? rank : n;
    jcas::CMatrix b(n, r);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < r; ++j) b(i, j) = gen.next_complex_normal();
    return b * b.adjoint();
}

inline jcas::ChannelSet random_channels(std::uint64_t seed, int k, int n_tx, double sigma_c2 = 1.0,
                                        int n_paths = 6) {
    jcas::ChannelConfig cfg;
    cfg.n_users = k;
    cfg.n_paths = n_paths;
    cfg.rng_seed = seed;
    cfg.sigma_c2 = sigma_c2;
    return jcas::generate_channels(cfg, jcas::ArrayConfig(n_tx, n_tx, 0.5));
}

} // namespace jcas_test

#endif
