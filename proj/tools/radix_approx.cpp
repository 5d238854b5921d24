// radix-approx: command-line front end.
//
//   radix-approx <subcommand> [options]
//
// Exit status: 0 ok, 2 invariant violation, 3 resource limit, 4 indeterminate
// comparison, 1 bad input, >= 100 argument parsing errors.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "radix_approx/acceptance.hpp"
#include "radix_approx/radix_approx.hpp"

#ifndef RADIX_APPROX_VERSION
#define RADIX_APPROX_VERSION "0.0.0"
#endif

namespace ra = radix_approx;
using json = nlohmann::ordered_json;

namespace {

enum class Format { Json, Csv, Human };

struct RunConfig {
    unsigned precision_bits = 128;
    std::uint64_t enumeration_cap = ra::kDefaultEnumerationCap;
    std::uint64_t node_budget = ra::kDefaultNodeBudget;
    Format format = Format::Json;
    std::uint64_t seed = ra::acceptance::kDefaultSeed;
    ra::Rational tolerance = ra::Rational(1, 1000000000);
    unsigned threads = 1;
    bool reproducible = false;  // report wall time as null so output is byte-stable
};

const char* format_name(Format f) {
    switch (f) {
        case Format::Json: return "json";
        case Format::Csv: return "csv";
        case Format::Human: return "human";
    }
    return "json";
}

Format parse_format(const std::string& s) {
    if (s == "json") return Format::Json;
    if (s == "csv") return Format::Csv;
    if (s == "human") return Format::Human;
    throw ra::DomainError("unknown output format '" + s + "' (json, csv, human)");
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    unsigned long long x = 0;
    try {
        x = std::stoull(v, &used, 0);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size() || v.empty() || v[0] == '-')
        throw ra::DomainError("config key '" + key + "' expects a non-negative integer, got '" + v + "'");
    return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ra::DomainError("config key '" + key + "' expects true/false, got '" + v + "'");
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

void apply_config_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "precision-bits")
        cfg.precision_bits = static_cast<unsigned>(parse_u64(key, value));
    else if (key == "enumeration-cap")
        cfg.enumeration_cap = parse_u64(key, value);
    else if (key == "node-budget")
        cfg.node_budget = parse_u64(key, value);
    else if (key == "output-format")
        cfg.format = parse_format(value);
    else if (key == "seed")
        cfg.seed = parse_u64(key, value);
    else if (key == "tolerance")
        cfg.tolerance = ra::Rational::parse(value);
    else if (key == "threads")
        cfg.threads = static_cast<unsigned>(parse_u64(key, value));
    else if (key == "reproducible")
        cfg.reproducible = parse_bool(key, value);
    else
        throw ra::DomainError("unknown config key '" + key + "'");
}

// key=value lines; '#' starts a comment.
void load_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ra::DomainError("cannot read config file '" + path + "'");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ra::DomainError(path + ":" + std::to_string(lineno) + ": expected key=value");
        apply_config_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
}

void validate(const RunConfig& cfg) {
    if (cfg.precision_bits < 64) throw ra::DomainError("precision-bits must be >= 64");
    if (cfg.enumeration_cap == 0) throw ra::DomainError("enumeration-cap must be positive");
    if (cfg.node_budget == 0) throw ra::DomainError("node-budget must be positive");
    if (cfg.threads == 0) throw ra::DomainError("threads must be positive");
    if (cfg.tolerance.sign() < 0) throw ra::DomainError("tolerance must be >= 0");
}

json config_json(const RunConfig& cfg) {
    json j;
    j["precision_bits"] = cfg.precision_bits;
    j["enumeration_cap"] = cfg.enumeration_cap;
    j["node_budget"] = cfg.node_budget;
    j["output_format"] = format_name(cfg.format);
    j["seed"] = cfg.seed;
    j["tolerance"] = cfg.tolerance.fraction_str();
    j["threads"] = cfg.threads;
    j["reproducible"] = cfg.reproducible;
    return j;
}

// ---- serialization helpers --------------------------------------------------

json real_json(const ra::RealValue& v) {
    json j;
    if (v.is_exact()) {
        j["exact"] = v.exact().fraction_str();
    } else {
        j["lower"] = v.lower().fraction_str();
        j["upper"] = v.upper().fraction_str();
        j["approx"] = v.to_double();
    }
    return j;
}

json opt_real_json(const std::optional<ra::RealValue>& v) { return v ? real_json(*v) : json(nullptr); }

// Rational used in CSV distance columns: the exact value, or the upper end.
ra::Rational csv_rational(const ra::RealValue& v) { return v.is_exact() ? v.exact() : v.upper(); }

std::string digits_str(ra::Base b, const ra::Integer& n) {
    const auto d = ra::to_digits(b, n).digits;
    if (d.empty()) return "0";
    std::string s;
    for (auto it = d.rbegin(); it != d.rend(); ++it) {
        if (!s.empty() && b.value() > 10) s += ':';
        s += std::to_string(*it);
    }
    return s;
}

struct CsvRow {
    std::string b, N, witness, distance_num, distance_den, bound, passed;
};

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string bool_str(std::optional<bool> b) { return b ? (*b ? "true" : "false") : ""; }

struct Outcome {
    json input;
    json result;
    std::vector<CsvRow> rows;
    int exit_code = 0;
};

void human_lines(const json& j, const std::string& prefix, std::ostream& out) {
    if (j.is_object()) {
        // an enclosure prints on one line
        if (j.contains("exact") && j.size() == 1) {
            out << prefix << ": " << j["exact"].get<std::string>() << "\n";
            return;
        }
        if (j.contains("approx") && j.contains("lower")) {
            std::ostringstream v;
            v.precision(17);
            v << j["approx"].get<double>();
            out << prefix << ": ~" << v.str() << "\n";
            return;
        }
        for (const auto& [k, v] : j.items()) human_lines(v, prefix.empty() ? k : prefix + "." + k, out);
    } else if (j.is_array()) {
        bool scalar = true;
        for (const auto& v : j) scalar = scalar && !v.is_structured();
        if (scalar) {
            out << prefix << ": [";
            for (std::size_t i = 0; i < j.size(); ++i) out << (i ? ", " : "") << (j[i].is_string() ? j[i].get<std::string>() : j[i].dump());
            out << "]\n";
        } else {
            for (std::size_t i = 0; i < j.size(); ++i) human_lines(j[i], prefix + "[" + std::to_string(i) + "]", out);
        }
    } else {
        out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
}

// ---- subcommands ------------------------------------------------------------

struct Args {
    long base = 2;
    std::string limit;  // N, arbitrary size
    std::string gamma;
    std::string method;
    std::string set = "Db";
    long r = 0;
    long k = 1;
    std::optional<long> m;
    std::optional<std::string> beta;
    std::optional<long> t;
    std::optional<long> e_max;
    std::optional<long> G;
    std::vector<std::string> values;
    bool exclude_zero = false;
};

ra::Integer parse_N(const std::string& s, const char* what = "--limit") {
    ra::Integer n;
    if (s.empty() || n.set_str(s, 10) != 0) throw ra::DomainError(std::string(what) + " expects a decimal integer");
    if (n < 1) throw ra::DomainError(std::string(what) + " must be >= 1");
    return n;
}

ra::RealValue parse_gamma(const Args& a, const RunConfig& cfg) {
    if (a.gamma.empty()) throw ra::DomainError("--gamma is required");
    return ra::parse_real(a.gamma, ra::Precision{cfg.precision_bits});
}

ra::SetSpec parse_set(const Args& a) {
    const ra::Base b(a.base);
    if (a.set == "Db") return ra::SetSpec::Db(b);
    if (a.set == "DbStar") return ra::SetSpec::DbStar(b);
    if (a.set == "Dbr") return ra::SetSpec::Dbr(b, a.r);
    if (a.set == "DbStarR") return ra::SetSpec::DbStarR(b, a.r);
    throw ra::DomainError("--set must be one of Db, DbStar, Dbr, DbStarR");
}

Outcome cmd_search(const Args& a, const RunConfig& cfg) {
    const ra::Base b(a.base);
    const ra::Integer N = parse_N(a.limit);
    const ra::RealValue gamma = parse_gamma(a, cfg);
    const std::string method = a.method.empty() ? "oracle" : a.method;
    Outcome o;
    o.input = {{"base", a.base}, {"N", N.get_str()}, {"gamma", a.gamma}, {"method", method}};

    ra::ApproxResult res;
    if (method == "pigeonhole") {
        res = ra::pigeonhole_witness(gamma, b, N);
    } else if (method == "oracle" || method == "reference") {
        const ra::SetSpec spec = parse_set(a);
        o.input["set"] = spec.tag();
        if (method == "oracle")
            res = ra::oracle_min(gamma, spec, N, ra::SearchOptions{cfg.threads, cfg.enumeration_cap});
        else
            res = ra::oracle_min_reference(gamma, spec, N, cfg.enumeration_cap);
    } else {
        throw ra::DomainError("--method must be oracle, reference or pigeonhole");
    }

    const long t = ra::t_of(b, N);
    std::optional<ra::Rational> guarantee = res.guarantee;
    if (!guarantee && res.set.kind == ra::SetKind::Db) guarantee = ra::Rational(1, t + 1);
    std::optional<bool> passed;
    if (guarantee) passed = res.distance.upper() <= *guarantee;

    o.result["set"] = res.set.tag();
    o.result["mode"] = ra::to_string(res.mode);
    o.result["witness"] = res.witness.get_str();
    o.result["witness_digits"] = digits_str(b, res.witness);
    o.result["distance"] = real_json(res.distance);
    o.result["t"] = t;
    o.result["guarantee"] = guarantee ? json(guarantee->fraction_str()) : json(nullptr);
    o.result["passed"] = passed ? json(*passed) : json(nullptr);
    const ra::Rational d = csv_rational(res.distance);
    o.rows.push_back({std::to_string(a.base), N.get_str(), res.witness.get_str(), d.num().get_str(), d.den().get_str(),
                      guarantee ? guarantee->fraction_str() : "", bool_str(passed)});
    if (passed && !*passed) o.exit_code = 2;
    return o;
}

json int_list(const ra::IntSet& s) {
    json j = json::array();
    for (auto v : s) j.push_back(v);
    return j;
}

Outcome cmd_diffset(const Args& a, const RunConfig& cfg) {
    const ra::Base b(a.base);
    Outcome o;
    ra::IntSet S;
    std::optional<long> cap;
    std::string N_str;
    if (!a.values.empty()) {
        std::vector<std::int64_t> v;
        for (const auto& s : a.values) v.push_back(std::stoll(s));
        S = ra::make_set(std::move(v));
        o.input = {{"values", int_list(S)}};
    } else {
        const ra::Integer N = parse_N(a.limit);
        if (N > 1'000'000) throw ra::ResourceLimitError("diffset: N above 10^6 is outside the exhaustive search range");
        N_str = N.get_str();
        S = ra::db_upto(b, N.get_si());
        if (a.base >= 3) cap = ra::diffset_size_cap(b, N.get_si());
        o.input = {{"base", a.base}, {"N", N_str}};
    }
    const std::string method = a.method.empty() ? "both" : a.method;
    if (method != "m1" && method != "m2" && method != "both") throw ra::DomainError("--method must be m1, m2 or both");
    o.input["method"] = method;

    o.result["S"] = int_list(S);
    if (!a.values.empty()) o.result["D_plus"] = int_list(ra::positive_differences(S));
    std::optional<ra::DiffSetReport> m1, m2;
    if (method != "m2") m1 = ra::m_plus(S, ra::MPlusVariant::M1, std::nullopt, cfg.node_budget);
    if (method != "m1") m2 = ra::m_plus(S, ra::MPlusVariant::M2, std::nullopt, cfg.node_budget);
    auto rep_json = [](const ra::DiffSetReport& r) {
        return json{{"value", r.value}, {"witness", int_list(r.witness)}, {"nodes", r.nodes}};
    };
    o.result["M1_plus"] = m1 ? rep_json(*m1) : json(nullptr);
    o.result["M2_plus"] = m2 ? rep_json(*m2) : json(nullptr);
    o.result["cap"] = cap ? json(*cap) : json(nullptr);
    bool ok = true;
    if (m1 && m2) ok = ok && m2->value <= m1->value;
    if (cap && m1) ok = ok && m1->value <= *cap;
    if (cap && m2) ok = ok && m2->value <= *cap;
    o.result["passed"] = ok;
    const ra::DiffSetReport& shown = m1 ? *m1 : *m2;
    std::string w;
    for (std::size_t i = 0; i < shown.witness.size(); ++i) w += (i ? " " : "") + std::to_string(shown.witness[i]);
    o.rows.push_back({a.values.empty() ? std::to_string(a.base) : "", N_str, w, std::to_string(shown.value), "1",
                      cap ? std::to_string(*cap) : "", bool_str(ok)});
    if (!ok) o.exit_code = 2;
    return o;
}

Outcome cmd_expsum(const Args& a, const RunConfig& cfg) {
    const ra::Base b(a.base);
    const ra::RealValue gamma = parse_gamma(a, cfg);
    const ra::Precision p{cfg.precision_bits};
    ra::ExpSumOptions eo;
    eo.threads = cfg.threads;
    eo.precision = p;
    eo.tolerance = cfg.tolerance;
    Outcome o;
    o.input = {{"base", a.base}, {"r", a.r}, {"k", a.k}, {"gamma", a.gamma}, {"exclude_zero", a.exclude_zero || a.m.has_value()}};
    if (a.m) o.input["m"] = *a.m;
    if (a.beta) o.input["beta"] = *a.beta;

    const ra::ExpSumReport rep = a.m ? ra::decay_check(b, a.r, a.k, *a.m, gamma, eo)
                                     : ra::eval_expsum(b, a.r, a.k, gamma, a.exclude_zero, eo);
    const ra::Rational full = rep.full_magnitude.center();
    const ra::Rational prod = rep.product_magnitude.center();
    const ra::Rational deviation = (full - prod).abs() / std::max(prod, ra::Rational(1));
    const bool identity_ok = deviation <= cfg.tolerance;
    const bool cosine_ok = rep.full_magnitude.lower() <= rep.cosine_bound.upper() + cfg.tolerance;

    o.result["terms"] = rep.terms;
    o.result["value"] = {{"re", real_json(rep.value.re)}, {"im", real_json(rep.value.im)}};
    o.result["magnitude"] = real_json(rep.magnitude);
    o.result["full_magnitude"] = real_json(rep.full_magnitude);
    o.result["product_magnitude"] = real_json(rep.product_magnitude);
    o.result["identity_deviation"] = deviation.to_double();
    o.result["identity_ok"] = identity_ok;
    o.result["cosine_bound"] = real_json(rep.cosine_bound);
    o.result["cosine_bound_ok"] = cosine_ok;
    bool ok = identity_ok && cosine_ok;

    if (a.m) {
        const ra::ShiftCount sc = ra::small_shift_count(b, a.r, a.k, gamma, *rep.hypothesis_beta, true);
        o.result["hypothesis_beta"] = rep.hypothesis_beta->fraction_str();
        o.result["decay_bound"] = opt_real_json(rep.decay_bound);
        json V = json::array();
        for (long d : *rep.V_set) V.push_back(d);
        o.result["V"] = V;
        o.result["small_shifts"] = {{"g", sc.g}, {"d", sc.d_list}};
    }
    if (a.beta) {
        const ra::Rational beta = ra::Rational::parse(*a.beta);
        const ra::HypothesisResult h = ra::hypothesis_check(b, a.r, beta, gamma, cfg.enumeration_cap);
        const ra::ShiftCount sc = ra::small_shift_count(b, a.r, a.k, gamma, beta, h.holds);
        o.result["hypothesis"] = {{"beta", beta.fraction_str()},
                                  {"holds", h.holds},
                                  {"counterexample", h.counterexample ? json(h.counterexample->get_str()) : json(nullptr)}};
        o.result["small_shifts"] = {{"g", sc.g}, {"d", sc.d_list}, {"below_3_sqrt_k", ra::below_three_sqrt(sc.g, a.k)}};
    }
    o.result["passed"] = ok;
    const ra::Rational mag = csv_rational(rep.magnitude);
    const ra::RealValue& bound = rep.decay_bound ? *rep.decay_bound : rep.cosine_bound;
    o.rows.push_back({std::to_string(a.base), "", "", mag.num().get_str(), mag.den().get_str(), bound.upper().fraction_str(),
                      bool_str(ok)});
    if (!ok) o.exit_code = 2;
    return o;
}

Outcome cmd_discrepancy(const Args& a, const RunConfig& cfg) {
    const ra::Precision p{cfg.precision_bits};
    Outcome o;
    std::vector<ra::RealValue> points;
    if (!a.values.empty()) {
        for (const auto& s : a.values) points.push_back(ra::parse_real(s, p));
        o.input = {{"points", a.values}};
    } else {
        const ra::Integer T = parse_N(a.limit, "--count");
        if (T > 1'000'000) throw ra::ResourceLimitError("discrepancy: T above 10^6");
        points = ra::kronecker_points(parse_gamma(a, cfg), T.get_si());
        o.input = {{"gamma", a.gamma}, {"T", T.get_str()}};
    }
    if (a.G) o.input["G"] = *a.G;
    const ra::DiscrepancyReport rep = a.G ? ra::erdos_turan_check(points, *a.G, p) : ra::discrepancy_L(points);
    o.result["T"] = rep.T;
    o.result["L"] = real_json(rep.L_value);
    o.result["witness"] = {{"interval", rep.witness.str()},
                           {"left", rep.witness.left.fraction_str()},
                           {"right", rep.witness.right.fraction_str()},
                           {"left_closed", rep.witness.left_closed},
                           {"right_closed", rep.witness.right_closed}};
    o.result["G"] = rep.G ? json(rep.G) : json(nullptr);
    o.result["et_rhs"] = opt_real_json(rep.et_rhs);
    o.result["slack"] = opt_real_json(rep.slack);
    o.result["passed"] = rep.et_holds ? json(*rep.et_holds) : json(nullptr);
    const ra::Rational L = csv_rational(rep.L_value);
    o.rows.push_back({"", std::to_string(rep.T), rep.witness.str(), L.num().get_str(), L.den().get_str(),
                      rep.et_rhs ? rep.et_rhs->upper().fraction_str() : "", bool_str(rep.et_holds)});
    return o;
}

Outcome cmd_adversary(const Args& a, const RunConfig& cfg) {
    const ra::Base b(a.base);
    Outcome o;
    if (a.t) {
        const long e_max = a.e_max.value_or(*a.t);
        o.input = {{"base", a.base}, {"k", a.k}, {"t", *a.t}, {"e_max", e_max}};
        const ra::NoMultiplesResult nm = ra::no_multiples_check(b, a.k, *a.t, e_max, cfg.enumeration_cap);
        const bool applies = a.k * (a.base - 1) > *a.t;
        o.result["k_exceeds_t_over_b_minus_1"] = applies;
        o.result["checked"] = nm.checked;
        o.result["no_multiples"] = nm.holds;
        o.result["counterexample"] = nm.counterexample ? json(nm.counterexample->get_str()) : json(nullptr);
        o.result["h_formula"] = ra::h_case_formula(b, a.k, *a.t).get_str();
        o.result["modulus"] = ra::Integer(ra::ipow(b.integer(), static_cast<unsigned long>(a.k)) - 1).get_str();
        o.result["passed"] = nm.holds || !applies;
        o.rows.push_back({std::to_string(a.base), "", nm.counterexample ? nm.counterexample->get_str() : "", "", "",
                          "", bool_str(nm.holds || !applies)});
        return o;
    }
    const ra::Integer N = parse_N(a.limit, "--count");
    o.input = {{"base", a.base}, {"N", N.get_str()}};
    const ra::AdversaryCertificate c =
        ra::adversarial_gamma(b, N, cfg.threads, cfg.enumeration_cap, ra::Precision{cfg.precision_bits});
    o.result["T"] = c.T;
    o.result["k"] = c.k;
    o.result["gamma_N"] = c.gamma_N.fraction_str();
    o.result["min_distance"] = c.min_distance.fraction_str();
    o.result["min_witness_index"] = c.min_witness_index.get_str();
    o.result["min_witness"] = c.min_witness.get_str();
    o.result["lower_bound"] = real_json(c.lower_bound);
    o.result["sharper_bound"] = c.sharper_bound.fraction_str();
    o.result["passed"] = c.passed;
    o.rows.push_back({std::to_string(a.base), N.get_str(), c.min_witness.get_str(), c.min_distance.num().get_str(),
                      c.min_distance.den().get_str(), c.lower_bound.upper().fraction_str(), bool_str(c.passed)});
    if (!c.passed) o.exit_code = 2;
    return o;
}

Outcome cmd_constants(const Args& a, const RunConfig& cfg) {
    const ra::Base b(a.base);
    const ra::Precision p{cfg.precision_bits};
    Outcome o;
    o.input = {{"base", a.base}};
    const ra::ConstantSet cs = ra::compute_constants(b, p);
    o.result["U"] = real_json(cs.U);
    o.result["C"] = real_json(cs.C);
    o.result["H_b"] = real_json(cs.H_b);
    o.result["J_b"] = real_json(cs.J_b);
    o.result["argmax_m"] = cs.argmax_m;
    o.result["m_max_used"] = cs.m_max_used;
    o.result["first_informative_t"] = ra::first_informative_t(b, cs);
    CsvRow row{std::to_string(a.base), "", "", "", "", cs.J_b.upper().fraction_str(), ""};
    if (!a.limit.empty()) {
        const ra::Integer N = parse_N(a.limit);
        o.input["N"] = N.get_str();
        const ra::DistanceBound tb = ra::distance_bound(b, N, cs, p);
        o.result["bound"] = {{"N", N.get_str()},
                             {"t", tb.t},
                             {"m_N", tb.m_N ? json(*tb.m_N) : json(nullptr)},
                             {"star_bound", opt_real_json(tb.star_bound)},
                             {"db_bound", opt_real_json(tb.db_bound)},
                             {"vacuous", tb.vacuous}};
        row.N = N.get_str();
        if (tb.db_bound) row.bound = tb.db_bound->upper().fraction_str();
    }
    o.rows.push_back(row);
    return o;
}

Outcome cmd_verify_all(const RunConfig& cfg) {
    Outcome o;
    o.input = json::object();
    ra::acceptance::Options opt;
    opt.seed = cfg.seed;
    opt.threads = cfg.threads;
    opt.precision = ra::Precision{cfg.precision_bits};
    json list = json::array();
    bool all = true;
    for (const auto& r : ra::acceptance::run_all(opt)) {
        std::cerr << ra::acceptance::format_line(r) << "\n";
        all = all && r.passed;
        json item = {{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}};
        item["seconds"] = cfg.reproducible ? json(nullptr) : json(r.seconds);
        list.push_back(item);
        o.rows.push_back({"", "", std::to_string(r.id), "", "", "", r.passed ? "true" : "false"});
    }
    o.result["criteria"] = list;
    o.result["passed"] = all;
    if (!all) o.exit_code = 2;
    return o;
}

void emit(const Outcome& o, const std::string& sub, const RunConfig& cfg, double seconds, const json* error,
          std::ostream& out) {
    json j;
    j["tool"] = "radix-approx";
    j["version"] = RADIX_APPROX_VERSION;
    j["subcommand"] = sub;
    j["config"] = config_json(cfg);
    j["input"] = o.input.is_null() ? json::object() : o.input;
    if (error)
        j["error"] = *error;
    else
        j["result"] = o.result;
    j["wall_time_s"] = cfg.reproducible ? json(nullptr) : json(seconds);

    switch (cfg.format) {
        case Format::Json: out << j.dump(2) << "\n"; break;
        case Format::Human: human_lines(j, "", out); break;
        case Format::Csv: {
            out << "subcommand,b,N,witness,distance_num,distance_den,bound,passed\r\n";
            for (const CsvRow& r : o.rows)
                out << csv_field(sub) << ',' << csv_field(r.b) << ',' << csv_field(r.N) << ',' << csv_field(r.witness)
                    << ',' << csv_field(r.distance_num) << ',' << csv_field(r.distance_den) << ','
                    << csv_field(r.bound) << ',' << csv_field(r.passed) << "\r\n";
            if (error) out << csv_field(sub) << ",,,,,,,false\r\n";
            break;
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rational approximation with 0/1-digit denominators: witnesses, bounds and certificates."};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(RADIX_APPROX_VERSION));

    std::optional<std::string> format_flag, out_flag, tolerance_flag;
    std::optional<unsigned> threads_flag, precision_flag;
    std::optional<std::uint64_t> seed_flag;
    bool reproducible_flag = false;
    app.add_option("--format", format_flag, "json | csv | human");
    app.add_option("--out", out_flag, "write the report to FILE");
    app.add_option("--threads", threads_flag, "worker threads (results do not depend on it)");
    app.add_option("--precision-bits", precision_flag, "working precision for enclosures (>= 64)");
    app.add_option("--seed", seed_flag, "seed for randomized sweeps");
    app.add_option("--tolerance", tolerance_flag, "slack on floating bound checks, as p/q or decimal");
    app.add_flag("--reproducible", reproducible_flag, "omit timings so identical runs give identical bytes");

    Args a;
    auto add_base = [&](CLI::App* s) { s->add_option("--base,-b", a.base, "digit base b >= 2"); };
    auto* search = app.add_subcommand("search", "best approximation ||gamma n|| over a digit set");
    add_base(search);
    search->add_option("--limit,--count,-N", a.limit, "search range [1, N]")->required();
    search->add_option("--gamma", a.gamma, "p/q, decimal, pi, e, sqrtN, or value+-radius")->required();
    search->add_option("--method", a.method, "oracle | reference | pigeonhole");
    search->add_option("--set", a.set, "Db | DbStar | Dbr | DbStarR");
    search->add_option("--r", a.r, "digit positions 0..r for Dbr/DbStarR");

    auto* diffset = app.add_subcommand("diffset", "maximal sets with all positive differences in S");
    add_base(diffset);
    diffset->add_option("--limit,--count,-N", a.limit, "S = Db cap [1, N]");
    diffset->add_option("--values", a.values, "explicit S instead of Db")->delimiter(',');
    diffset->add_option("--method", a.method, "m1 | m2 | both");

    auto* expsum = app.add_subcommand("expsum", "exponential sum over Db(r) with its product form and bounds");
    add_base(expsum);
    expsum->add_option("--r", a.r, "digit positions 0..r")->required();
    expsum->add_option("--k", a.k, "frequency k");
    expsum->add_option("--gamma", a.gamma, "real gamma")->required();
    expsum->add_option("--m", a.m, "run the decay check with beta = 1/(2 b^m)");
    expsum->add_option("--beta", a.beta, "check the separation hypothesis at beta");
    expsum->add_flag("--exclude-zero", a.exclude_zero, "drop the j = 0 term");

    auto* disc = app.add_subcommand("discrepancy", "discrepancy of {n gamma} or of given points");
    disc->add_option("--gamma", a.gamma, "points {n gamma}, n = 1..T");
    disc->add_option("--count,--limit,-T", a.limit, "T");
    disc->add_option("--values,--points", a.values, "explicit points")->delimiter(',');
    disc->add_option("--G", a.G, "also check the Erdos-Turan bound with this G");

    auto* adv = app.add_subcommand("adversary", "lower-bound certificate, or the no-multiples check with --t");
    add_base(adv);
    adv->add_option("--count,--limit,-N", a.limit, "first N elements of Db");
    adv->add_option("--k", a.k, "modulus b^k - 1 (with --t)");
    adv->add_option("--t", a.t, "number of powers in each sum");
    adv->add_option("--e-max", a.e_max, "largest exponent (default t)");

    auto* consts = app.add_subcommand("constants", "U, C, H_b, J_b and the explicit bound at N");
    add_base(consts);
    consts->add_option("--limit,--count,-N", a.limit, "evaluate the bound at N");

    auto* verify = app.add_subcommand("verify-all", "run the acceptance suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    RunConfig cfg;
    std::string sub = app.get_subcommands().front()->get_name();
    try {
        if (const char* path = std::getenv("RADIX_APPROX_CONFIG"); path && *path) load_config_file(cfg, path);
        if (format_flag) cfg.format = parse_format(*format_flag);
        if (threads_flag) cfg.threads = *threads_flag;
        if (precision_flag) cfg.precision_bits = *precision_flag;
        if (seed_flag) cfg.seed = *seed_flag;
        if (tolerance_flag) cfg.tolerance = ra::Rational::parse(*tolerance_flag);
        if (reproducible_flag) cfg.reproducible = true;
        validate(cfg);
    } catch (const std::exception& e) {
        std::cerr << "radix-approx: " << e.what() << "\n";
        return 1;
    }

    std::ofstream file;
    if (out_flag) {
        file.open(*out_flag, std::ios::binary);
        if (!file) {
            std::cerr << "radix-approx: cannot open '" << *out_flag << "' for writing\n";
            return 1;
        }
    }
    std::ostream& out = out_flag ? static_cast<std::ostream&>(file) : std::cout;

    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
    auto fail = [&](int code, const char* kind, const std::string& msg, const std::string& witness) {
        std::cerr << "radix-approx: " << kind << ": " << msg << (witness.empty() ? "" : " [" + witness + "]") << "\n";
        json err = {{"kind", kind}, {"message", msg}, {"witness", witness.empty() ? json(nullptr) : json(witness)}};
        emit(Outcome{}, sub, cfg, elapsed(), &err, out);
        return code;
    };

    try {
        Outcome o;
        if (*search) o = cmd_search(a, cfg);
        else if (*diffset) o = cmd_diffset(a, cfg);
        else if (*expsum) o = cmd_expsum(a, cfg);
        else if (*disc) o = cmd_discrepancy(a, cfg);
        else if (*adv) o = cmd_adversary(a, cfg);
        else if (*consts) o = cmd_constants(a, cfg);
        else if (*verify) o = cmd_verify_all(cfg);
        emit(o, sub, cfg, elapsed(), nullptr, out);
        return o.exit_code;
    } catch (const ra::InvariantViolation& e) {
        return fail(2, "invariant_violation", e.what(), e.witness());
    } catch (const ra::ResourceLimitError& e) {
        return fail(3, "resource_limit", e.what(), "");
    } catch (const ra::IndeterminateError& e) {
        return fail(4, "indeterminate", e.what(), "");
    } catch (const ra::HypothesisViolation& e) {
        return fail(1, "hypothesis_violation", e.what(), e.witness());
    } catch (const ra::DomainError& e) {
        return fail(1, "domain_error", e.what(), "");
    } catch (const std::exception& e) {
        return fail(1, "error", e.what(), "");
    }
}
