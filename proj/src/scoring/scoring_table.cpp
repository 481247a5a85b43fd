#include "riskscore/scoring_table.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "riskscore/errors.hpp"
#include "riskscore/text.hpp"

namespace riskscore {

using json = nlohmann::json;

double logistic(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

std::string to_string(Comparator op) {
    switch (op) {
        case Comparator::LessEq: return "<=";
        case Comparator::GreaterEq: return ">=";
        case Comparator::Eq: return "=";
    }
    return "?";
}

namespace {

Comparator parse_comparator(std::string_view token, int line) {
    if (token == "<=") return Comparator::LessEq;
    if (token == ">=") return Comparator::GreaterEq;
    if (token == "=") return Comparator::Eq;
    throw ParseError("unknown comparator '" + std::string(token) + "'", line);
}

}  // namespace

bool Condition::holds(const RecordView& record) const {
    if (op == Comparator::Eq && std::holds_alternative<std::string>(threshold))
        return record.text(feature) == std::get<std::string>(threshold);
    double value = record.numeric(feature);
    double cut = std::get<double>(threshold);
    switch (op) {
        case Comparator::LessEq: return value <= cut;
        case Comparator::GreaterEq: return value >= cut;
        case Comparator::Eq: return value == cut;
    }
    return false;
}

void ScoringTable::validate() const {
    if (coef_min > coef_max)
        throw ValidationError("coefficient range is empty");
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].points < coef_min || rows[i].points > coef_max)
            throw ValidationError("row " + std::to_string(i + 1) + " (" +
                                  rows[i].condition.feature + "): points " +
                                  std::to_string(rows[i].points) + " outside [" +
                                  std::to_string(coef_min) + ", " +
                                  std::to_string(coef_max) + "]");
    }
    if (intercept < kOffsetMin || intercept > kOffsetMax)
        throw ValidationError("intercept " + std::to_string(intercept) +
                              " outside [" + std::to_string(kOffsetMin) + ", " +
                              std::to_string(kOffsetMax) + "]");
}

TableScore ScoringTable::evaluate(const RecordView& record) const {
    TableScore result;
    for (const auto& row : rows)
        if (row.condition.holds(record)) result.score += row.points;
    result.probability = logistic(static_cast<double>(intercept + result.score));
    return result;
}

std::string ScoringTable::to_text() const {
    std::string out;
    out += "intercept " + std::to_string(intercept) + "\n";
    out += "coef_range " + std::to_string(coef_min) + " " + std::to_string(coef_max) + "\n";
    for (const auto& row : rows) {
        std::string threshold =
            std::holds_alternative<double>(row.condition.threshold)
                ? format_number(std::get<double>(row.condition.threshold))
                : std::get<std::string>(row.condition.threshold);
        out += row.condition.feature + " " + to_string(row.condition.op) + " " + threshold +
               " " + std::to_string(row.points) + "\n";
    }
    return out;
}

ScoringTable ScoringTable::from_text(const std::string& text) {
    ScoringTable table;
    bool saw_intercept = false;
    int line_no = 0;
    for (const auto& raw : split(text, '\n')) {
        ++line_no;
        std::string_view line = trim(raw);
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = trim(line.substr(0, hash));
        if (line.empty()) continue;
        std::istringstream tok{std::string(line)};
        std::string first;
        tok >> first;
        if (first == "intercept") {
            std::string value;
            tok >> value;
            if (value.empty()) throw ParseError("intercept needs a value", line_no);
            table.intercept = static_cast<int>(parse_long(value, "intercept"));
            saw_intercept = true;
            continue;
        }
        if (first == "coef_range") {
            std::string lo, hi;
            tok >> lo >> hi;
            if (lo.empty() || hi.empty())
                throw ParseError("coef_range needs two values", line_no);
            table.coef_min = static_cast<int>(parse_long(lo, "coef_range"));
            table.coef_max = static_cast<int>(parse_long(hi, "coef_range"));
            continue;
        }
        std::string op, threshold, points, extra;
        tok >> op >> threshold >> points >> extra;
        if (op.empty() || threshold.empty() || points.empty() || !extra.empty())
            throw ParseError("expected 'feature op threshold points'", line_no);
        ScoringRow row;
        row.condition.feature = first;
        row.condition.op = parse_comparator(op, line_no);
        try {
            row.condition.threshold = parse_double(threshold, "threshold");
        } catch (const ValueTypeError&) {
            if (row.condition.op != Comparator::Eq)
                throw ParseError("numeric comparator needs a numeric threshold", line_no);
            row.condition.threshold = threshold;
        }
        try {
            row.points = static_cast<int>(parse_long(points, "points"));
        } catch (const ValueTypeError&) {
            throw ParseError("points must be an integer", line_no);
        }
        table.rows.push_back(std::move(row));
    }
    if (!saw_intercept) throw ParseError("model file lacks an intercept line");
    table.validate();
    return table;
}

std::string ScoringTable::to_json() const {
    json doc;
    doc["intercept"] = intercept;
    doc["coef_range"] = {coef_min, coef_max};
    doc["link"] = "logistic";
    doc["rows"] = json::array();
    for (const auto& row : rows) {
        json r;
        r["feature"] = row.condition.feature;
        r["op"] = to_string(row.condition.op);
        if (std::holds_alternative<double>(row.condition.threshold))
            r["threshold"] = std::get<double>(row.condition.threshold);
        else
            r["threshold"] = std::get<std::string>(row.condition.threshold);
        r["points"] = row.points;
        doc["rows"].push_back(r);
    }
    return doc.dump(2) + "\n";
}

ScoringTable ScoringTable::from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("bad JSON: ") + e.what());
    }
    ScoringTable table;
    try {
        table.intercept = doc.at("intercept").get<int>();
        if (doc.contains("coef_range")) {
            table.coef_min = doc["coef_range"].at(0).get<int>();
            table.coef_max = doc["coef_range"].at(1).get<int>();
        }
        for (const auto& r : doc.at("rows")) {
            ScoringRow row;
            row.condition.feature = r.at("feature").get<std::string>();
            std::string op = r.at("op").get<std::string>();
            row.condition.op = parse_comparator(op, -1);
            if (r.at("threshold").is_string())
                row.condition.threshold = r.at("threshold").get<std::string>();
            else
                row.condition.threshold = r.at("threshold").get<double>();
            row.points = r.at("points").get<int>();
            table.rows.push_back(std::move(row));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad model JSON: ") + e.what());
    }
    table.validate();
    return table;
}

ScoringTable ScoringTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UserError("cannot open model " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json")
        return from_json(buf.str());
    return from_text(buf.str());
}

void ScoringTable::save(const std::string& path) const {
    validate();
    std::ofstream out(path);
    if (!out) throw UserError("cannot write model " + path);
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json")
        out << to_json();
    else
        out << to_text();
}

}  // namespace riskscore
