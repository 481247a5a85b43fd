#include "riskscore/psa.hpp"

#include "riskscore/errors.hpp"

namespace riskscore {

namespace {

int violent_conviction_points(int count) {
    if (count <= 0) return 0;
    if (count <= 2) return 1;
    return 2;
}

}  // namespace

int PsaNcaModel::raw_points(const Factors& f) {
    int points = 0;
    points += f.age_at_current_arrest <= 22 ? 2 : 0;
    points += f.pending_charge ? 3 : 0;
    points += f.prior_misdemeanor_conviction ? 1 : 0;
    points += f.prior_felony_conviction ? 1 : 0;
    points += violent_conviction_points(f.prior_violent_convictions);
    points += f.prior_fta_two_year <= 0 ? 0 : (f.prior_fta_two_year == 1 ? 1 : 2);
    points += f.prior_incarceration ? 2 : 0;
    return points;
}

int PsaNcaModel::scale(int raw_points) {
    if (raw_points < 0 || raw_points > 13)
        throw ValidationError("NCA raw points " + std::to_string(raw_points) +
                              " outside [0, 13]");
    return kScaleMap[raw_points];
}

PsaNcaModel::Factors PsaNcaModel::factors_from(const RecordView& record) {
    Factors f;
    f.age_at_current_arrest = static_cast<int>(record.numeric("age_at_current_charge"));
    f.pending_charge = record.numeric("current_pending_charge") != 0.0;
    f.prior_misdemeanor_conviction = record.numeric("p_misdemeanor") > 0;
    f.prior_felony_conviction = record.numeric("p_felony") > 0;
    f.prior_violent_convictions = static_cast<int>(record.numeric("p_violence"));
    f.prior_fta_two_year = static_cast<int>(record.numeric("p_fta_two_year"));
    f.prior_incarceration = record.numeric("p_incarceration") != 0.0;
    return f;
}

NcaResult PsaNcaModel::score(const RecordView& record) const {
    NcaResult result;
    result.raw_points = raw_points(factors_from(record));
    result.scaled = scale(result.raw_points);
    return result;
}

int PsaNvcaModel::raw_points(const Factors& f) {
    int points = 0;
    points += f.current_violent_offense ? 2 : 0;
    points += f.current_violent_and_young ? 1 : 0;
    points += f.pending_charge ? 1 : 0;
    points += f.prior_conviction ? 1 : 0;
    points += violent_conviction_points(f.prior_violent_convictions);
    return points;
}

bool PsaNvcaModel::flag(int raw_points) {
    if (raw_points < 0 || raw_points > 7)
        throw ValidationError("NVCA raw points " + std::to_string(raw_points) +
                              " outside [0, 7]");
    return raw_points >= kFlagThreshold;
}

PsaNvcaModel::Factors PsaNvcaModel::factors_from(const RecordView& record) {
    Factors f;
    f.current_violent_offense = record.numeric("current_violence") != 0.0;
    f.current_violent_and_young = record.numeric("current_violence20") != 0.0;
    f.pending_charge = record.numeric("current_pending_charge") != 0.0;
    f.prior_conviction =
        record.numeric("p_misdemeanor") > 0 || record.numeric("p_felony") > 0;
    f.prior_violent_convictions = static_cast<int>(record.numeric("p_violence"));
    return f;
}

NvcaResult PsaNvcaModel::score(const RecordView& record) const {
    NvcaResult result;
    result.raw_points = raw_points(factors_from(record));
    result.flag = flag(result.raw_points);
    return result;
}

}  // namespace riskscore
