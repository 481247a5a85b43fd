#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "riskscore/config.hpp"
#include "riskscore/dataset.hpp"

namespace riskscore {

// Region profile for the synthetic population generator. Target base rates
// default to a state-scale, convicted-charges-only profile; the age-risk
// curve is a bump whose peak/width/strength differ between region profiles.
struct SynthConfig {
    // Indexed by kRecidivismTypes order.
    std::array<double, 6> two_year_rate = {0.204, 0.034, 0.087, 0.039, 0.096, 0.156};
    std::array<double, 6> six_month_rate = {0.057, 0.007, 0.020, 0.009, 0.024, 0.039};

    double age_peak = 33;
    double age_width = 10;
    double age_strength = 1.2;
    double history_strength = 0.9;
    double noise = 0.8;
    bool convicted_only = true;

    std::vector<std::pair<std::string, double>> race_mix = {
        {"Caucasian", 0.807}, {"African-American", 0.168}, {"Other", 0.025}};
    std::vector<std::pair<std::string, double>> sex_mix = {{"male", 0.684},
                                                           {"female", 0.316}};
    std::uint64_t seed = 0;

    void validate() const;
    static SynthConfig from_config(const KeyValueConfig& kv);
    static SynthConfig from_file(const std::string& path);

    // The fixed schema all synthetic datasets share.
    static Schema schema();
};

// Deterministic in (config, n). Labels are drawn so each target rate is hit
// in expectation, then charge events are materialized to reproduce exactly
// those labels through build_labels.
Dataset synthesize(const SynthConfig& config, size_t n);

}  // namespace riskscore
