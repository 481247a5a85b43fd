#pragma once

#include <array>

#include "riskscore/dataset.hpp"

namespace riskscore {

// Arnold Public Safety Assessment point models. Point values and scaling maps
// are the published ones; inputs come straight from named record fields.

struct NcaResult {
    int raw_points = 0;  // 0..13
    int scaled = 1;      // 1..6
};

struct NvcaResult {
    int raw_points = 0;  // 0..7
    bool flag = false;   // raw >= 4
};

class PsaNcaModel {
public:
    struct Factors {
        int age_at_current_arrest = 23;
        bool pending_charge = false;
        bool prior_misdemeanor_conviction = false;
        bool prior_felony_conviction = false;
        int prior_violent_convictions = 0;
        int prior_fta_two_year = 0;
        bool prior_incarceration = false;
    };

    static int raw_points(const Factors& f);
    static int scale(int raw_points);
    static constexpr std::array<int, 14> kScaleMap = {1, 2, 2, 3, 3, 4, 4,
                                                      5, 5, 6, 6, 6, 6, 6};

    // Reads age_at_current_charge, current_pending_charge, p_misdemeanor,
    // p_felony, p_violence, p_fta_two_year, p_incarceration.
    static Factors factors_from(const RecordView& record);
    NcaResult score(const RecordView& record) const;
};

class PsaNvcaModel {
public:
    struct Factors {
        bool current_violent_offense = false;
        bool current_violent_and_young = false;  // violent and age <= 20
        bool pending_charge = false;
        bool prior_conviction = false;  // misdemeanor or felony
        int prior_violent_convictions = 0;
    };

    static int raw_points(const Factors& f);
    static bool flag(int raw_points);
    static constexpr int kFlagThreshold = 4;

    // Reads current_violence, current_violence20, current_pending_charge,
    // p_misdemeanor, p_felony, p_violence.
    static Factors factors_from(const RecordView& record);
    NvcaResult score(const RecordView& record) const;
};

}  // namespace riskscore
