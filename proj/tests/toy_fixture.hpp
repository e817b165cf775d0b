#pragma once

#include "lcool/translate.hpp"

namespace lcool::testing {

/// Toy source/target data, DAE and CycleGAN trained once per test binary with
/// the default hyperparameters.
struct ToySetup {
    Dataset source;
    Dataset target;
    Dataset tests;
    DaeModel dae;
    ToyCycleGan gan;

    static const ToySetup& get() {
        static const ToySetup setup = [] {
            ToySetup s;
            s.source = generate_source({1000, Domain::source, 11});
            s.target = generate_target({1000, Domain::target, 12});
            s.tests = make_offmanifold_tests(default_offmanifold_points());
            Rng dae_rng(13);
            s.dae = train_dae(s.source.points, {.sigma_sq = 0.09, .epochs = 100, .learning_rate = 3e-3}, dae_rng);
            Rng gan_rng(14);
            s.gan = train_cyclegan_toy(s.source, s.target, {}, gan_rng);
            return s;
        }();
        return setup;
    }
};

} // namespace lcool::testing
