#pragma once

#include <array>

// Every constant the benchmark models depend on. The oracles in oracle.cpp and
// models.cpp read the same values, so a change here moves both sides.

namespace tracemc::constants {

// Gaussian mean models. Normal parameters below are variances, as written in
// the model definitions; the model layer converts to standard deviations.
inline constexpr double kNormalMeanPriorMean = 0.0;
inline constexpr double kNormalMeanPriorVariance = 1.0;
inline constexpr double kNormalMeanObservation = 5.0;
inline constexpr double kNormalMeanNoiseVariance = 1.0;
inline constexpr double kVarianceShape = 3.0;  // v ~ InverseGamma(3, 1)
inline constexpr double kVarianceScale = 1.0;
inline constexpr double kFixedVariance = 1.0 / 3.0;  // branch m >= 0

// Hard prior: m ~ Uniform(0, 10000), 31 observations with noise variance 1.
inline constexpr double kHardPriorLo = 0.0;
inline constexpr double kHardPriorHi = 10000.0;
inline constexpr double kHardNoiseStd = 1.0;
// Synthetic draws from N(2, 1), shifted so their sample mean is exactly 2.
inline constexpr std::array<double, 31> kHardData = {
    0.5890, 0.3453, 1.8835, 1.0549, 1.4531, 1.1630, 1.5315, 1.7970, 1.4689, 1.7734, 4.4784,
    2.9857, 2.4258, 0.5952, 2.7138, 1.6820, 1.0433, 2.0812, 3.2844, 3.6172, 2.7515, 1.2290,
    2.7277, 2.8138, 0.9574, 2.2161, 4.1724, 1.2965, 2.2000, 1.2788, 2.3902};

// Branching: r ~ Poisson(4); l = 6 if r > 4 else fib(3r) + Poisson(4);
// observe Poisson(l) = 6.
inline constexpr double kBranchingRate = 4.0;
inline constexpr int kBranchingThreshold = 4;
inline constexpr double kBranchingLargeRate = 6.0;
inline constexpr double kBranchingObservation = 6.0;

// HMM: 3 states, uniform initial distribution, Normal(mean[s], 1) emissions.
inline constexpr int kHmmStates = 3;
inline constexpr std::array<double, 3> kHmmInitial = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
inline constexpr std::array<std::array<double, 3>, 3> kHmmTransition = {{
    {0.1, 0.5, 0.4},
    {0.2, 0.2, 0.6},
    {0.15, 0.15, 0.7},
}};
inline constexpr std::array<double, 3> kHmmEmissionMean = {-1.0, 1.0, 0.0};
inline constexpr double kHmmEmissionStd = 1.0;
inline constexpr std::array<double, 10> kHmmObservations = {0.9,  0.8, 0.7,  0.0, -0.025,
                                                            -5.0, -2.0, -0.1, 0.0, 0.13};

// Marsaglia polar-method prior N(1, variance 5); two observations with
// likelihood variance 2.
inline constexpr double kMarsagliaPriorMean = 1.0;
inline constexpr double kMarsagliaPriorVariance = 5.0;
inline constexpr double kMarsagliaNoiseVariance = 2.0;
inline constexpr std::array<double, 2> kMarsagliaObservations = {9.0, 8.0};

// Classifier weight priors.
inline constexpr double kWeightPriorStd = 1.0;

}  // namespace tracemc::constants
