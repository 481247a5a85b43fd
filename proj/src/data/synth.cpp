#include "riskscore/synth.hpp"

#include <algorithm>
#include <cmath>

#include "riskscore/errors.hpp"
#include "riskscore/rng.hpp"
#include "riskscore/scoring_table.hpp"
#include "riskscore/text.hpp"

namespace riskscore {

void SynthConfig::validate() const {
    for (int t = 0; t < 6; ++t) {
        if (two_year_rate[t] <= 0 || two_year_rate[t] >= 1 || six_month_rate[t] <= 0 ||
            six_month_rate[t] >= 1)
            throw ConfigError("rates must lie strictly inside (0, 1)");
        if (six_month_rate[t] > two_year_rate[t])
            throw ConfigError(std::string(kRecidivismTypes[t]) +
                              ": six-month rate exceeds the two-year rate");
    }
    double general_ratio = six_month_rate[0] / two_year_rate[0];
    for (int t = 1; t < 6; ++t) {
        if (two_year_rate[t] > two_year_rate[0])
            throw ConfigError(std::string(kRecidivismTypes[t]) +
                              ": two-year rate exceeds the general rate");
        if (six_month_rate[t] / two_year_rate[t] > general_ratio + 1e-12)
            throw ConfigError(std::string(kRecidivismTypes[t]) +
                              ": six-month/two-year ratio exceeds the general ratio");
    }
    auto check_mix = [](const std::vector<std::pair<std::string, double>>& mix,
                        const char* what) {
        if (mix.empty()) throw ConfigError(std::string(what) + " mix is empty");
        double total = 0;
        for (const auto& [name, p] : mix) {
            if (p < 0) throw ConfigError(std::string(what) + " mix has negative weight");
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-6)
            throw ConfigError(std::string(what) + " mix must sum to 1");
    };
    check_mix(race_mix, "race");
    check_mix(sex_mix, "sex");
    if (!(age_width > 0)) throw ConfigError("age_width must be positive");
    if (noise < 0) throw ConfigError("noise must be >= 0");
}

namespace {

std::vector<std::pair<std::string, double>> parse_mix(const std::string& text,
                                                      const std::string& key) {
    std::vector<std::pair<std::string, double>> mix;
    for (const auto& part : split(text, ',')) {
        auto bits = split(trim(part), ':');
        if (bits.size() != 2)
            throw ConfigError(key + ": expected name:weight entries");
        mix.emplace_back(std::string(trim(bits[0])),
                         parse_double(bits[1], key + " weight"));
    }
    return mix;
}

}  // namespace

SynthConfig SynthConfig::from_config(const KeyValueConfig& kv) {
    SynthConfig cfg;
    for (int t = 0; t < 6; ++t) {
        std::string type = kRecidivismTypes[t];
        cfg.two_year_rate[t] =
            kv.get_double("rate." + type + ".two_year", cfg.two_year_rate[t]);
        cfg.six_month_rate[t] =
            kv.get_double("rate." + type + ".six_month", cfg.six_month_rate[t]);
    }
    cfg.age_peak = kv.get_double("age.peak", cfg.age_peak);
    cfg.age_width = kv.get_double("age.width", cfg.age_width);
    cfg.age_strength = kv.get_double("age.strength", cfg.age_strength);
    cfg.history_strength = kv.get_double("history.strength", cfg.history_strength);
    cfg.noise = kv.get_double("noise", cfg.noise);
    cfg.convicted_only = kv.get_bool("convicted_only", cfg.convicted_only);
    if (kv.has("mix.race")) cfg.race_mix = parse_mix(kv.get_string("mix.race", ""), "mix.race");
    if (kv.has("mix.sex")) cfg.sex_mix = parse_mix(kv.get_string("mix.sex", ""), "mix.sex");
    cfg.seed = static_cast<std::uint64_t>(kv.get_long("seed", static_cast<long>(cfg.seed)));
    cfg.validate();
    return cfg;
}

SynthConfig SynthConfig::from_file(const std::string& path) {
    return from_config(KeyValueConfig::load(path));
}

Schema SynthConfig::schema() {
    Schema s;
    auto add = [&](const char* name, ColumnType type, ColumnRole role) {
        s.columns.push_back({name, type, role});
    };
    add("person_id", ColumnType::Str, ColumnRole::Id);
    add("race", ColumnType::Str, ColumnRole::Sensitive);
    add("sex", ColumnType::Str, ColumnRole::Sensitive);
    add("age_at_current_charge", ColumnType::Int, ColumnRole::Feature);
    for (const char* count :
         {"p_arrest", "p_charges", "p_violence", "p_felony", "p_misdemeanor", "p_drug",
          "p_property", "p_traffic", "p_fta_two_year", "p_pending_charge", "p_probation"})
        add(count, ColumnType::Int, ColumnRole::Feature);
    for (const char* flag :
         {"p_incarceration", "six_month", "one_year", "three_year", "five_year",
          "current_violence", "current_violence20", "current_pending_charge"})
        add(flag, ColumnType::Bool, ColumnRole::Feature);
    for (const auto& label : LabelSet::names())
        s.columns.push_back({label, ColumnType::Bool, ColumnRole::Label});
    add("events", ColumnType::Str, ColumnRole::Events);
    return s;
}

namespace {

std::string pick_mix(Rng& rng, const std::vector<std::pair<std::string, double>>& mix) {
    double u = rng.uniform();
    double acc = 0;
    for (const auto& [name, p] : mix) {
        acc += p;
        if (u < acc) return name;
    }
    return mix.back().first;
}

struct Draft {
    RecordData record;
    double risk = 0;  // pre-intercept linear score for the general label
};

}  // namespace

Dataset synthesize(const SynthConfig& config, size_t n) {
    if (n == 0) throw ConfigError("n must be positive");
    config.validate();
    Rng rng(config.seed);

    std::vector<Draft> drafts;
    drafts.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        Draft draft;
        RecordData& rec = draft.record;
        rec.id = "synth-" + std::to_string(i);
        rec.strings["race"] = pick_mix(rng, config.race_mix);
        rec.strings["sex"] = pick_mix(rng, config.sex_mix);

        double age_u = rng.uniform();
        int age = 18 + static_cast<int>(std::floor(53.0 * std::pow(age_u, 1.4)));
        age = std::min(age, 70);
        rec.numbers["age_at_current_charge"] = age;

        double hist = rng.uniform();  // latent criminal-history intensity
        double geo_p = 0.35 + 0.4 * (1.0 - hist);
        int arrests = rng.geometric(geo_p, 15);
        int charges = arrests + rng.geometric(0.6, 10);
        int misdemeanors = 0, felonies = 0, violent = 0, drug = 0, property = 0,
            traffic = 0;
        for (int c = 0; c < charges; ++c) {
            double level = rng.uniform();
            if (level < 0.55)
                ++misdemeanors;
            else if (level < 0.85)
                ++felonies;
            if (rng.bernoulli(0.15)) ++violent;
            if (rng.bernoulli(0.30)) ++drug;
            if (rng.bernoulli(0.25)) ++property;
            if (rng.bernoulli(0.20)) ++traffic;
        }
        rec.numbers["p_arrest"] = arrests;
        rec.numbers["p_charges"] = charges;
        rec.numbers["p_violence"] = violent;
        rec.numbers["p_felony"] = felonies;
        rec.numbers["p_misdemeanor"] = misdemeanors;
        rec.numbers["p_drug"] = drug;
        rec.numbers["p_property"] = property;
        rec.numbers["p_traffic"] = traffic;
        int fta = rng.geometric(0.7, 5);
        int pending = rng.geometric(0.8, 4);
        rec.numbers["p_fta_two_year"] = fta;
        rec.numbers["p_pending_charge"] = pending;
        rec.numbers["p_probation"] = rng.geometric(0.75, 5);
        bool incarcerated = rng.bernoulli(0.15 + 0.3 * std::min(1.0, felonies / 3.0));
        rec.numbers["p_incarceration"] = incarcerated ? 1 : 0;

        double recency = std::min(0.9, 0.1 + 0.12 * arrests);
        bool six = rng.bernoulli(recency * 0.5);
        bool one = six || rng.bernoulli(recency * 0.3);
        bool three = one || rng.bernoulli(recency * 0.4);
        bool five = three || rng.bernoulli(recency * 0.3);
        rec.numbers["six_month"] = six;
        rec.numbers["one_year"] = one;
        rec.numbers["three_year"] = three;
        rec.numbers["five_year"] = five;

        bool current_violent = rng.bernoulli(0.12);
        rec.numbers["current_violence"] = current_violent;
        rec.numbers["current_violence20"] = (current_violent && age <= 20) ? 1 : 0;
        rec.numbers["current_pending_charge"] = rng.bernoulli(0.2) ? 1 : 0;

        double age_term = (age - config.age_peak) / config.age_width;
        double history_score =
            std::tanh((arrests + 0.5 * charges + fta + 2.0 * pending) / 4.0);
        draft.risk = config.age_strength * std::exp(-age_term * age_term) +
                     config.history_strength * history_score +
                     config.noise * rng.normal();
        drafts.push_back(std::move(draft));
    }

    // Calibrate the intercept so the mean general two-year probability hits
    // the target rate exactly on this sample.
    double lo = -40, hi = 40;
    for (int iter = 0; iter < 200; ++iter) {
        double mid = (lo + hi) / 2;
        double mean = 0;
        for (const auto& d : drafts) mean += logistic(d.risk + mid);
        mean /= drafts.size();
        if (mean < config.two_year_rate[0])
            lo = mid;
        else
            hi = mid;
    }
    double intercept = (lo + hi) / 2;

    double general_ratio = config.six_month_rate[0] / config.two_year_rate[0];

    Dataset data(SynthConfig::schema());
    for (auto& draft : drafts) {
        RecordData& rec = draft.record;
        LabelSet labels;
        bool general2 = rng.bernoulli(logistic(draft.risk + intercept));
        bool general6 = general2 && rng.bernoulli(general_ratio);
        labels.two_year[0] = general2;
        labels.six_month[0] = general6;
        for (int t = 1; t < 6; ++t) {
            double q2 = config.two_year_rate[t] / config.two_year_rate[0];
            bool t2 = general2 && rng.bernoulli(q2);
            double q6 = config.six_month_rate[t] /
                        (config.two_year_rate[t] * general_ratio);
            bool t6 = t2 && general6 && rng.bernoulli(std::min(1.0, q6));
            labels.two_year[t] = t2;
            labels.six_month[t] = t6;
        }

        auto event_day = [&](bool within_six) {
            return within_six
                       ? static_cast<int>(rng.below(kSixMonthDays + 1))
                       : kSixMonthDays + 1 +
                             static_cast<int>(rng.below(kTwoYearDays - kSixMonthDays));
        };
        auto convicted_flag = [&] {
            return config.convicted_only ? true : rng.bernoulli(0.66);
        };
        for (int t = 0; t < 6; ++t) {
            if (!labels.two_year[t]) continue;
            ChargeEvent event;
            event.offset_days = event_day(labels.six_month[t]);
            event.convicted = convicted_flag();
            switch (t) {
                case 1: event.tags = {"violent"}; break;
                case 2: event.tags = {"drug"}; break;
                case 3: event.tags = {"property"}; break;
                case 4: event.level = "felony"; break;
                case 5: event.level = "misdemeanor"; break;
                default: break;  // general: untyped charge
            }
            rec.events.push_back(std::move(event));
        }
        rec.labels = labels;
        rec.has_labels = true;
        data.append(rec);
    }
    return data;
}

}  // namespace riskscore
