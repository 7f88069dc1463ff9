#include "omegalab/harness.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

#include "omegalab/nesting.hpp"
#include "omegalab/table.hpp"

namespace omegalab {

using json = nlohmann::ordered_json;

namespace {

json trace_to_json(const NestingTrace& t) {
    json steps = json::array();
    for (std::size_t n = 0; n < t.steps.size(); ++n) {
        const NestStep& s = t.steps[n];
        steps.push_back({{"step", n + 1},
                         {"a", s.a.str()},
                         {"b", s.b.str()},
                         {"width", (s.b - s.a).str()},
                         {"idx_a", s.idx_a},
                         {"idx_b", s.idx_b}});
    }
    json out{{"enum", t.enum_id},
             {"interval", {t.base.lo().str(), t.base.hi().str()}},
             {"mode", t.mode == ScanMode::Restart ? "restart" : "frontier"},
             {"budget", t.budget},
             {"budget_used", t.budget_used},
             {"termination", t.termination == Termination::BudgetExhausted ? "budget-exhausted"
                                                                           : "sequence-exhausted"},
             {"steps", std::move(steps)}};
    out["last_interval"] = {t.last_interval().lo().str(), t.last_interval().hi().str()};
    if (t.eta) out["eta"] = t.eta->str();
    if (t.remaining)
        out["remaining"] = {{"index", t.remaining->first}, {"value", t.remaining->second.str()}};
    return out;
}

std::string trace_to_csv(const NestingTrace& t) {
    std::string csv = "step,a,b,width,idx_a,idx_b\n";
    for (std::size_t n = 0; n < t.steps.size(); ++n) {
        const NestStep& s = t.steps[n];
        csv += std::to_string(n + 1) + "," + s.a.str() + "," + s.b.str() + "," +
               (s.b - s.a).str() + "," + std::to_string(s.idx_a) + "," + std::to_string(s.idx_b) +
               "\n";
    }
    return csv;
}

json conditions_to_json(const std::vector<ConditionReport>& reports) {
    json out = json::array();
    for (const auto& r : reports) {
        json ev = json::object();
        for (const auto& [k, v] : r.evidence) ev[k] = v;
        out.push_back({{"condition", r.condition},
                       {"status", probe_status_name(r.status)},
                       {"note", r.note},
                       {"evidence", std::move(ev)}});
    }
    return out;
}

json permute_trace_to_json(const PermutationTrace& t) {
    json swaps = json::array();
    for (const auto& s : t.swaps) {
        json rec{{"i", s.i}};
        if (s.j) rec["j"] = *s.j;
        if (s.synth) rec["synth"] = {{"position", s.synth->position}, {"ones", s.synth->ones}};
        swaps.push_back(std::move(rec));
    }
    json escapes = json::array();
    for (const auto& e : t.escapes) escapes.push_back({{"i", e.i}, {"row", e.row_id}});
    return json{{"mode", t.mode == PermuteMode::StrictWindow ? "strict" : "synthesis"},
                {"tie", t.tie.kind == TieBreak::Kind::First ? "first" : "seeded"},
                {"seed", t.tie.seed},
                {"window", t.window},
                {"swaps", std::move(swaps)},
                {"failures", t.failures},
                {"escapes", std::move(escapes)}};
}

struct CommandOutput {
    std::string name;
    std::string bytes;
};

OpenInterval config_interval(const ExperimentConfig& c) {
    return OpenInterval(Rational::from_string(c.interval_lo), Rational::from_string(c.interval_hi));
}

std::vector<CommandOutput> cmd_nest(const ExperimentConfig& c) {
    EnumPtr e = parse_enumeration(c.enum_spec);
    ScanMode mode;
    if (c.scan_mode == "restart") mode = ScanMode::Restart;
    else if (c.scan_mode == "frontier") mode = ScanMode::Frontier;
    else throw std::domain_error("harness: unknown scan mode '" + c.scan_mode + "'");
    NestingTrace t = run_nesting(*e, config_interval(c), c.budget, mode);
    json tj = trace_to_json(t);
    tj["index_violations"] = check_defining_index(t).size();
    tj["exclusion_violations"] = check_exclusion(t, *e, t.steps.size()).size();
    auto conds = condition_probe(*e, config_interval(c), c.budget, c.denominator_bound);
    return {{"trace.json", tj.dump(2) + "\n"},
            {"trace.csv", trace_to_csv(t)},
            {"conditions.json", conditions_to_json(conds).dump(2) + "\n"}};
}

std::vector<CommandOutput> cmd_epilog(const ExperimentConfig& c) {
    EnumPtr e = parse_enumeration(c.enum_spec);
    EpilogResult r = epilog_scan(*e, config_interval(c), c.prefix);
    json updates = json::array();
    std::string csv = "index,value\n";
    for (const auto& [i, v] : r.updates) {
        updates.push_back({{"index", i}, {"value", v.str()}});
        csv += std::to_string(i) + "," + v.str() + "\n";
    }
    json out{{"enum", e->id()},
             {"interval", {c.interval_lo, c.interval_hi}},
             {"prefix", c.prefix},
             {"scanned", r.scanned},
             {"x", r.x.str()},
             {"eta", r.eta.str()},
             {"updates", std::move(updates)}};
    return {{"epilog.json", out.dump(2) + "\n"}, {"updates.csv", std::move(csv)}};
}

std::vector<CommandOutput> cmd_diagonal(const ExperimentConfig& c) {
    TableSpec spec{c.enum_spec, c.h_family};
    DigitTable t = DigitTable::build(spec, c.window);
    std::string diag = diagonal(t, c.window);
    std::string anti = antidiagonal(t, c.window);
    json out{{"enum", c.enum_spec},
             {"h_family", c.h_family},
             {"window", c.window},
             {"diagonal", diag},
             {"antidiagonal", anti}};
    std::string csv = "k,diagonal,antidiagonal\n";
    for (std::uint64_t k = 0; k < c.window; ++k)
        csv += std::to_string(k + 1) + "," + diag[k] + std::string(",") + anti[k] + "\n";
    return {{"diagonal.json", out.dump(2) + "\n"},
            {"diagonal.csv", std::move(csv)},
            {"table.txt", t.dump()}};
}

std::vector<CommandOutput> cmd_permute(const ExperimentConfig& c) {
    TableSpec spec{c.enum_spec, c.h_family};
    DigitTable before = DigitTable::build(spec, c.window);
    PermuteMode mode;
    if (c.permute_mode == "strict") mode = PermuteMode::StrictWindow;
    else if (c.permute_mode == "synthesis") mode = PermuteMode::Synthesis;
    else throw std::domain_error("harness: unknown permute mode '" + c.permute_mode + "'");
    TieBreak tie = TieBreak::first();
    if (c.tie == "seeded") tie = TieBreak::seeded(c.seed);
    else if (c.tie != "first") throw std::domain_error("harness: unknown tie break '" + c.tie + "'");

    PermuteResult res = permute_dmodular(before, mode, tie);

    // The recorded trace must rebuild the permuted window exactly.
    DigitTable replayed = replay_trace(before, res.trace);
    for (std::uint64_t i = 1; i <= res.table.window(); ++i)
        if (replayed.row(i)->id() != res.table.row(i)->id())
            throw internal_error("harness: trace replay diverged at row " + std::to_string(i));

    std::uint64_t modular = 0;
    for (std::uint64_t i = 1; i <= res.table.window(); ++i)
        if (is_n_modular(*res.table.row(i), i)) ++modular;

    json out = permute_trace_to_json(res.trace);
    out["modular_rows"] = modular;
    out["replay_verified"] = true;
    std::string csv = "i,action,detail\n";
    for (const auto& s : res.trace.swaps) {
        if (s.j) csv += std::to_string(s.i) + ",swap," + std::to_string(*s.j) + "\n";
        else csv += std::to_string(s.i) + ",synthesize,ones=" + std::to_string(s.synth->ones) + "\n";
    }
    for (auto i : res.trace.failures) csv += std::to_string(i) + ",failure,\n";
    return {{"permute.json", out.dump(2) + "\n"},
            {"permute.csv", std::move(csv)},
            {"before.txt", before.dump()},
            {"after.txt", res.table.dump()}};
}

std::vector<CommandOutput> cmd_family(const ExperimentConfig& c) {
    auto members = modular_family(c.digit_prefix, c.prefix);
    json out = json::array();
    std::string csv = "n,value,digits\n";
    for (std::size_t i = 0; i < members.size(); ++i) {
        auto stream = to_digit_stream(members[i]);
        std::string digits = stream->digits_prefix(32);
        out.push_back({{"n", i + 1}, {"value", members[i].str()}, {"digits", digits}});
        csv += std::to_string(i + 1) + "," + members[i].str() + "," + digits + "\n";
    }
    return {{"family.json", out.dump(2) + "\n"}, {"family.csv", std::move(csv)}};
}

std::vector<CommandOutput> cmd_count(const ExperimentConfig& c) {
    std::uint64_t count = count_avoiding_periods(static_cast<unsigned>(c.prefix));
    json out{{"length", c.prefix}, {"count", count}};
    return {{"count.json", out.dump(2) + "\n"}};
}

std::vector<CommandOutput> cmd_displace(const ExperimentConfig& c) {
    if (c.windows.empty()) throw std::domain_error("harness: displace needs at least one window");
    Rational target = Rational::from_string(c.target);
    TableSpec spec{c.enum_spec, c.h_family};
    auto entries = displacement_track(target, spec, c.windows);
    json out = json::array();
    std::string csv = "window,initial,final\n";
    for (const auto& e : entries) {
        json rec{{"window", e.window}};
        std::string ini = "absent", fin = "-";
        if (e.initial) ini = std::to_string(*e.initial);
        if (!e.absent) fin = e.final ? std::to_string(*e.final) : "escaped";
        rec["initial"] = ini;
        rec["final"] = fin;
        out.push_back(std::move(rec));
        csv += std::to_string(e.window) + "," + ini + "," + fin + "\n";
    }
    json top{{"target", target.str()}, {"entries", std::move(out)}};
    return {{"displace.json", top.dump(2) + "\n"}, {"displace.csv", std::move(csv)}};
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::domain_error(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::domain_error("config: expected a JSON object");
    ExperimentConfig c;
    auto get_str = [&](const char* key, std::string& into) {
        if (j.contains(key)) into = j.at(key).get<std::string>();
    };
    auto get_u64 = [&](const char* key, std::uint64_t& into) {
        if (j.contains(key)) {
            if (!j.at(key).is_number_unsigned())
                throw std::domain_error(std::string("config: field '") + key +
                                        "' must be a non-negative integer");
            into = j.at(key).get<std::uint64_t>();
        }
    };
    try {
        get_str("command", c.command);
        get_str("enum", c.enum_spec);
        if (j.contains("interval")) {
            auto iv = j.at("interval");
            if (!iv.is_array() || iv.size() != 2)
                throw std::domain_error("config: 'interval' must be [lo, hi]");
            c.interval_lo = iv[0].get<std::string>();
            c.interval_hi = iv[1].get<std::string>();
        }
        get_u64("budget", c.budget);
        get_u64("prefix", c.prefix);
        get_u64("window", c.window);
        get_str("scan_mode", c.scan_mode);
        get_str("permute_mode", c.permute_mode);
        get_str("tie", c.tie);
        get_u64("seed", c.seed);
        get_str("h_family", c.h_family);
        get_str("digit_prefix", c.digit_prefix);
        get_str("target", c.target);
        if (j.contains("windows")) c.windows = j.at("windows").get<std::vector<std::uint64_t>>();
        get_u64("denominator_bound", c.denominator_bound);
        get_str("out", c.out_dir);
        get_str("format", c.format);
    } catch (const json::exception& e) {
        throw std::domain_error(std::string("config: ") + e.what());
    }
    return c;
}

std::string ExperimentConfig::to_json_text() const {
    json j{{"command", command},
           {"enum", enum_spec},
           {"interval", {interval_lo, interval_hi}},
           {"budget", budget},
           {"prefix", prefix},
           {"window", window},
           {"scan_mode", scan_mode},
           {"permute_mode", permute_mode},
           {"tie", tie},
           {"seed", seed},
           {"h_family", h_family},
           {"digit_prefix", digit_prefix},
           {"target", target},
           {"windows", windows},
           {"denominator_bound", denominator_bound},
           {"out", out_dir},
           {"format", format}};
    return j.dump(2);
}

void ExperimentConfig::validate() const {
    static const std::vector<std::string> commands{"nest",   "epilog",        "diagonal", "permute",
                                                   "family", "count-periods", "displace"};
    if (std::find(commands.begin(), commands.end(), command) == commands.end())
        throw std::domain_error("config: unknown command '" + command + "'");
    if (budget == 0) throw std::domain_error("config: budget must be positive");
    if (window == 0) throw std::domain_error("config: window must be positive");
    if (format != "json" && format != "csv")
        throw std::domain_error("config: format must be json or csv");
    for (auto w : windows)
        if (w == 0) throw std::domain_error("config: window sizes must be positive");
}

std::string RunManifest::to_json_text() const {
    json outs = json::array();
    for (const auto& o : outputs) outs.push_back({{"path", o.path}, {"sha256", o.sha256}});
    json j{{"command", command},
           {"version", version},
           {"wall_ms", wall_ms},
           {"config", json::parse(config_json)},
           {"outputs", std::move(outs)}};
    return j.dump(2) + "\n";
}

std::string RunManifest::to_csv_text() const {
    std::string csv = "path,sha256\n";
    for (const auto& o : outputs) csv += o.path + "," + o.sha256 + "\n";
    return csv;
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw internal_error("sha256: digest computation failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 15]);
    }
    return out;
}

void atomic_write(const std::string& path, const std::string& bytes) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("write: cannot open " + tmp.string());
        f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        f.flush();
        if (!f) throw std::runtime_error("write: failed writing " + tmp.string());
    }
    fs::rename(tmp, target);
}

const char* version_string() { return "0.1.0"; }

RunManifest run_experiment(const ExperimentConfig& config) {
    config.validate();
    auto t0 = std::chrono::steady_clock::now();

    std::vector<CommandOutput> outputs;
    if (config.command == "nest") outputs = cmd_nest(config);
    else if (config.command == "epilog") outputs = cmd_epilog(config);
    else if (config.command == "diagonal") outputs = cmd_diagonal(config);
    else if (config.command == "permute") outputs = cmd_permute(config);
    else if (config.command == "family") outputs = cmd_family(config);
    else if (config.command == "count-periods") outputs = cmd_count(config);
    else if (config.command == "displace") outputs = cmd_displace(config);
    else throw std::domain_error("config: unknown command '" + config.command + "'");

    RunManifest manifest;
    manifest.command = config.command;
    manifest.config_json = config.to_json_text();
    manifest.version = version_string();
    namespace fs = std::filesystem;
    for (const auto& out : outputs) {
        fs::path p = fs::path(config.out_dir) / out.name;
        atomic_write(p.string(), out.bytes);
        manifest.outputs.push_back({out.name, sha256_hex(out.bytes)});
    }
    auto t1 = std::chrono::steady_clock::now();
    manifest.wall_ms =
        static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count());
    return manifest;
}

}  // namespace omegalab
