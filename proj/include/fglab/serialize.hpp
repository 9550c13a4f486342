#pragma once

#include <string>

#include "json.hpp"

#include "fglab/formal_group.hpp"
#include "fglab/series.hpp"

namespace fglab {

using ordered_json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

ordered_json cfg_to_json(const PrimeConfig& cfg);
PrimeConfig cfg_from_json(const ordered_json& j, const std::string& where);

// Canonical series document: terms sorted lexicographically by exponent
// vector, zero coefficients stripped, decimal-string mantissas reduced to the
// precision floor.  emit(parse(doc)) == doc byte-for-byte on canonical docs.
ordered_json series_to_json(const TruncatedSeries& s);
std::string emit_series(const TruncatedSeries& s);
TruncatedSeries series_from_json(const ordered_json& j, const std::string& where = "document");
TruncatedSeries parse_series(const std::string& text);

ordered_json elem_to_json(const ExtElem& z);
ordered_json budget_to_json(const PrecisionBudget& b);

// Deterministic machine-readable result of one command:
// {schema_version, kind, command, cfg, verdicts[], precisions[], data}.
class Report {
public:
    Report(std::string command, const PrimeConfig& cfg);

    void add_verdict(const std::string& name, bool pass, ordered_json detail = ordered_json::object());
    void add_precision(const std::string& name, long guaranteed);
    void add_budget(const std::string& name, const PrecisionBudget& b);
    ordered_json& data() { return data_; }
    const ordered_json& data() const { return data_; }

    bool all_pass() const;
    std::size_t verdict_count() const { return verdicts_.size(); }

    ordered_json to_json() const;
    std::string to_json_string() const;
    std::string to_text() const;

private:
    std::string command_;
    ordered_json cfg_;
    ordered_json verdicts_ = ordered_json::array();
    ordered_json precisions_ = ordered_json::array();
    ordered_json data_ = ordered_json::object();
};

} // namespace fglab
