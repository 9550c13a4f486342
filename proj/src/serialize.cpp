#include "fglab/serialize.hpp"

#include <algorithm>
#include <sstream>

namespace fglab {

namespace {

[[noreturn]] void schema_fail(const std::string& where, const std::string& what) {
    raise(errc::schema_error, where + ": " + what);
}

long get_int(const ordered_json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) schema_fail(where, std::string("missing field '") + key + "'");
    const auto& v = j.at(key);
    if (!v.is_number_integer()) schema_fail(where + "." + key, "expected an integer");
    return v.get<long>();
}

std::string get_string(const ordered_json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) schema_fail(where, std::string("missing field '") + key + "'");
    const auto& v = j.at(key);
    if (!v.is_string()) schema_fail(where + "." + key, "expected a string");
    return v.get<std::string>();
}

const char* tail_name(TailModel t) {
    switch (t) {
        case TailModel::integral: return "integral";
        case TailModel::log_denominators: return "log_denominators";
        case TailModel::unbounded: return "unbounded";
    }
    return "?";
}

TailModel tail_from_name(const std::string& s, const std::string& where) {
    if (s == "integral") return TailModel::integral;
    if (s == "log_denominators") return TailModel::log_denominators;
    if (s == "unbounded") return TailModel::unbounded;
    schema_fail(where, "unknown tail model '" + s + "'");
}

} // namespace

ordered_json cfg_to_json(const PrimeConfig& cfg) {
    return ordered_json{{"p", std::to_string(cfg.p())},
                        {"N", cfg.precision()},
                        {"D", cfg.den_cap()},
                        {"M", cfg.degree_cap()}};
}

PrimeConfig cfg_from_json(const ordered_json& j, const std::string& where) {
    if (!j.is_object()) schema_fail(where, "cfg must be an object");
    std::string ps = get_string(j, "p", where);
    std::uint64_t p = 0;
    try {
        std::size_t pos = 0;
        p = std::stoull(ps, &pos);
        if (pos != ps.size()) throw std::invalid_argument(ps);
    } catch (const std::exception&) {
        schema_fail(where + ".p", "expected a decimal prime, got '" + ps + "'");
    }
    long N = get_int(j, "N", where);
    long D = get_int(j, "D", where);
    long M = get_int(j, "M", where);
    try {
        return PrimeConfig(p, static_cast<int>(N), static_cast<int>(D), static_cast<int>(M));
    } catch (const Error& e) {
        schema_fail(where, e.what());
    }
}

ordered_json series_to_json(const TruncatedSeries& s) {
    ordered_json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["kind"] = "series";
    doc["cfg"] = cfg_to_json(s.config());
    doc["vars"] = s.vars();
    doc["prec_floor"] = s.prec_floor();
    doc["tail"] = tail_name(s.tail());
    // terms sorted lexicographically by exponent vector
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < s.coeffs().size(); ++i)
        if (!s.coeff_at(i).is_zero_at_prec()) order.push_back(i);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return s.basis().exponents(a) < s.basis().exponents(b);
    });
    ordered_json terms = ordered_json::array();
    for (std::size_t i : order) {
        const PAdicNum& c = s.coeff_at(i);
        terms.push_back(ordered_json{{"exponents", s.basis().exponents(i)},
                                     {"mantissa", c.mantissa_decimal()},
                                     {"shift", c.shift()}});
    }
    doc["terms"] = std::move(terms);
    return doc;
}

std::string emit_series(const TruncatedSeries& s) {
    return series_to_json(s).dump(2) + "\n";
}

TruncatedSeries series_from_json(const ordered_json& j, const std::string& where) {
    if (!j.is_object()) schema_fail(where, "series document must be an object");
    if (get_int(j, "schema_version", where) != kSchemaVersion)
        schema_fail(where + ".schema_version", "unsupported schema version");
    if (get_string(j, "kind", where) != "series") schema_fail(where + ".kind", "expected kind 'series'");
    if (!j.contains("cfg")) schema_fail(where, "missing field 'cfg'");
    PrimeConfig cfg = cfg_from_json(j.at("cfg"), where + ".cfg");
    long vars = get_int(j, "vars", where);
    if (vars < 1 || vars > 8) schema_fail(where + ".vars", "vars out of range [1, 8]");
    long floor = get_int(j, "prec_floor", where);
    if (floor < 1 || floor > cfg.precision())
        schema_fail(where + ".prec_floor", "prec_floor out of range [1, N]");
    TailModel tail = TailModel::integral;
    if (j.contains("tail")) tail = tail_from_name(get_string(j, "tail", where), where + ".tail");
    if (!j.contains("terms") || !j.at("terms").is_array()) schema_fail(where, "missing 'terms' array");

    std::vector<std::pair<std::vector<int>, PAdicNum>> terms;
    std::vector<std::vector<int>> seen;
    int idx = 0;
    for (const auto& t : j.at("terms")) {
        const std::string twhere = where + ".terms[" + std::to_string(idx++) + "]";
        if (!t.is_object()) schema_fail(twhere, "term must be an object");
        if (!t.contains("exponents") || !t.at("exponents").is_array())
            schema_fail(twhere, "missing 'exponents' array");
        std::vector<int> e;
        long total = 0;
        for (const auto& x : t.at("exponents")) {
            if (!x.is_number_integer() || x.get<long>() < 0)
                schema_fail(twhere + ".exponents", "exponents must be nonnegative integers");
            e.push_back(static_cast<int>(x.get<long>()));
            total += x.get<long>();
        }
        if (static_cast<long>(e.size()) != vars) schema_fail(twhere + ".exponents", "wrong arity");
        if (total > cfg.degree_cap())
            schema_fail(twhere + ".exponents",
                        "total degree " + std::to_string(total) + " exceeds M=" + std::to_string(cfg.degree_cap()));
        if (std::find(seen.begin(), seen.end(), e) != seen.end())
            schema_fail(twhere + ".exponents", "duplicate exponent vector");
        seen.push_back(e);
        std::string mant = get_string(t, "mantissa", twhere);
        long shift = get_int(t, "shift", twhere);
        if (shift < -cfg.den_cap() || shift > 0)
            schema_fail(twhere + ".shift", "shift out of range [-D, 0]");
        PAdicNum c = PAdicNum::zero(cfg);
        try {
            c = PAdicNum::from_parts(cfg, bigint(mant), static_cast<int>(shift), static_cast<int>(floor));
        } catch (const std::exception& ex) {
            schema_fail(twhere + ".mantissa", ex.what());
        }
        terms.emplace_back(std::move(e), std::move(c));
    }
    return TruncatedSeries::from_terms(cfg, static_cast<int>(vars), static_cast<int>(floor), terms, tail);
}

TruncatedSeries parse_series(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        raise(errc::schema_error, std::string("invalid JSON: ") + e.what());
    }
    return series_from_json(j);
}

ordered_json elem_to_json(const ExtElem& z) {
    ordered_json coeffs = ordered_json::array();
    for (const auto& c : z.coeffs())
        coeffs.push_back(
            ordered_json{{"mantissa", c.mantissa_decimal()}, {"shift", c.shift()}, {"prec", c.prec()}});
    ordered_json out;
    out["ring_degree"] = z.ring()->degree();
    out["ram_index"] = z.ring()->ram_index();
    out["coeffs"] = std::move(coeffs);
    auto v = z.valuation();
    out["val"] = v.v;
    out["val_exact"] = v.exact;
    return out;
}

ordered_json budget_to_json(const PrecisionBudget& b) {
    ordered_json losses = ordered_json::array();
    for (const auto& [deg, v] : b.losses)
        losses.push_back(ordered_json{{"degree", deg}, {"loss", v}});
    return ordered_json{{"input_floor", b.input_floor},
                        {"internal_precision", b.internal_precision},
                        {"output_floor", b.output_floor},
                        {"total_loss", b.total_loss()},
                        {"losses", std::move(losses)}};
}

Report::Report(std::string command, const PrimeConfig& cfg)
    : command_(std::move(command)), cfg_(cfg_to_json(cfg)) {}

void Report::add_verdict(const std::string& name, bool pass, ordered_json detail) {
    ordered_json v{{"name", name}, {"pass", pass}};
    if (!detail.empty()) v["detail"] = std::move(detail);
    verdicts_.push_back(std::move(v));
}

void Report::add_precision(const std::string& name, long guaranteed) {
    precisions_.push_back(ordered_json{{"name", name}, {"guaranteed", guaranteed}});
}

void Report::add_budget(const std::string& name, const PrecisionBudget& b) {
    precisions_.push_back(ordered_json{{"name", name}, {"budget", budget_to_json(b)}});
}

bool Report::all_pass() const {
    return std::all_of(verdicts_.begin(), verdicts_.end(),
                       [](const ordered_json& v) { return v.at("pass").get<bool>(); });
}

ordered_json Report::to_json() const {
    ordered_json out;
    out["schema_version"] = kSchemaVersion;
    out["kind"] = "report";
    out["command"] = command_;
    out["cfg"] = cfg_;
    out["verdicts"] = verdicts_;
    out["precisions"] = precisions_;
    out["data"] = data_;
    return out;
}

std::string Report::to_json_string() const {
    return to_json().dump(2) + "\n";
}

std::string Report::to_text() const {
    std::ostringstream os;
    os << "command: " << command_ << "\n";
    os << "cfg: p=" << cfg_.at("p").get<std::string>() << " N=" << cfg_.at("N").get<long>()
       << " D=" << cfg_.at("D").get<long>() << " M=" << cfg_.at("M").get<long>() << "\n";
    for (const auto& v : verdicts_) {
        os << (v.at("pass").get<bool>() ? "PASS" : "FAIL") << " " << v.at("name").get<std::string>();
        if (v.contains("detail")) os << "  " << v.at("detail").dump();
        os << "\n";
    }
    for (const auto& pr : precisions_) {
        os << "prec " << pr.at("name").get<std::string>();
        if (pr.contains("guaranteed")) os << " >= " << pr.at("guaranteed").get<long>();
        if (pr.contains("budget")) os << " " << pr.at("budget").dump();
        os << "\n";
    }
    if (!data_.empty()) os << "data: " << data_.dump() << "\n";
    os << (all_pass() ? "RESULT: ok" : "RESULT: verdict-false") << "\n";
    return os.str();
}

} // namespace fglab
