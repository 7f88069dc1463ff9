// Command-line front end: assembles an experiment configuration from a JSON
// file and/or flags (flags win), hands it to the shared library, and prints
// the run manifest.  Exit codes: 0 success, 2 usage, 3 internal engine fault.

#include <omegalab.h>

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::ordered_json;

namespace {

struct Flags {
    std::string config_file;
    std::string enum_spec;
    std::string interval;  // "lo,hi"
    std::uint64_t budget = 0;
    std::uint64_t window = 0;
    std::uint64_t prefix = 0;
    std::string mode;  // nest: restart|frontier; permute: strict|synthesis
    std::string tie;
    std::uint64_t seed = 0;
    std::string h_family;
    std::string digit_prefix;
    std::string target;
    std::string windows;  // "100,1000,..."
    std::uint64_t denominator_bound = 0;
    std::string out_dir;
    std::string format;
};

void add_common_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config_file, "JSON configuration file (flags override it)");
    cmd->add_option("--enum", f.enum_spec, "enumeration spec, e.g. \"zigzag | window=0,1\"");
    cmd->add_option("--interval", f.interval, "open interval as \"lo,hi\" fraction strings");
    cmd->add_option("--budget", f.budget, "elements the refinement may examine");
    cmd->add_option("--window", f.window, "table window size (rows)");
    cmd->add_option("--prefix", f.prefix, "scan length / family size / period length");
    cmd->add_option("--tie", f.tie, "partner tie-break: first | seeded");
    cmd->add_option("--seed", f.seed, "seed for the seeded tie-break");
    cmd->add_option("--h-family", f.h_family, "even-row stream family: sqrt | champernowne | seeded:<n>");
    cmd->add_option("--digit-prefix", f.digit_prefix, "starting digits for the modular family");
    cmd->add_option("--target", f.target, "fraction tracked by displace");
    cmd->add_option("--windows", f.windows, "comma-separated window sizes for displace");
    cmd->add_option("--denominator-bound", f.denominator_bound, "gap candidate denominator bound");
    cmd->add_option("--out", f.out_dir, "output directory");
    cmd->add_option("--format", f.format, "manifest format: json | csv")
        ->check(CLI::IsMember({"json", "csv"}));
}

int fail_usage(const std::string& message) {
    std::fprintf(stderr, "error: %s\n", message.c_str());
    return 2;
}

bool split_pair(const std::string& text, std::string& a, std::string& b) {
    auto comma = text.find(',');
    if (comma == std::string::npos) return false;
    a = text.substr(0, comma);
    b = text.substr(comma + 1);
    return !a.empty() && !b.empty() && b.find(',') == std::string::npos;
}

// Folds the file config (if any) and the given flags into one config object.
int build_config(const CLI::App* cmd, const Flags& f, const std::string& command, json& cfg) {
    if (cmd->count("--config") > 0) {
        std::ifstream in(f.config_file);
        if (!in) return fail_usage("cannot open config file '" + f.config_file + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        cfg = json::parse(buf.str(), nullptr, false);
        if (cfg.is_discarded() || !cfg.is_object())
            return fail_usage("config file '" + f.config_file + "' is not a JSON object");
    }
    cfg["command"] = command;
    if (cmd->count("--enum")) cfg["enum"] = f.enum_spec;
    if (cmd->count("--interval")) {
        std::string lo, hi;
        if (!split_pair(f.interval, lo, hi)) return fail_usage("--interval expects \"lo,hi\"");
        cfg["interval"] = {lo, hi};
    }
    if (cmd->count("--budget")) cfg["budget"] = f.budget;
    if (cmd->count("--window")) cfg["window"] = f.window;
    if (cmd->count("--prefix")) cfg["prefix"] = f.prefix;
    const CLI::Option* mode = cmd->get_option_no_throw("--mode");
    if (mode && mode->count() > 0) {
        // the shared flag lands on the field the command actually reads
        if (command == "nest") cfg["scan_mode"] = f.mode;
        else cfg["permute_mode"] = f.mode;
    }
    if (cmd->count("--tie")) cfg["tie"] = f.tie;
    if (cmd->count("--seed")) cfg["seed"] = f.seed;
    if (cmd->count("--h-family")) cfg["h_family"] = f.h_family;
    if (cmd->count("--digit-prefix")) cfg["digit_prefix"] = f.digit_prefix;
    if (cmd->count("--target")) cfg["target"] = f.target;
    if (cmd->count("--windows")) {
        std::vector<std::uint64_t> sizes;
        std::stringstream ss(f.windows);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                sizes.push_back(std::stoull(item));
            } catch (...) {
                return fail_usage("--windows expects comma-separated sizes");
            }
        }
        if (sizes.empty()) return fail_usage("--windows expects comma-separated sizes");
        cfg["windows"] = sizes;
    }
    if (cmd->count("--denominator-bound")) cfg["denominator_bound"] = f.denominator_bound;
    if (cmd->count("--out")) cfg["out"] = f.out_dir;
    if (cmd->count("--format")) cfg["format"] = f.format;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact nested-interval and digit-table experiments"};
    app.set_version_flag("--version", std::string(olab_version()));
    app.require_subcommand(1);

    struct Sub {
        const char* name;
        const char* help;
    };
    const Sub subs[] = {
        {"nest", "nested-interval refinement trace and condition probe"},
        {"epilog", "running-minimum scan with avoidance witness"},
        {"diagonal", "build a digit table, extract diagonal and antidiagonal"},
        {"permute", "one repair pass toward a fully modular window"},
        {"family", "members of the modular family for a digit prefix"},
        {"count-periods", "count periods avoiding the diagonal pattern"},
        {"displace", "track a target row across window sizes"},
    };

    Flags flags;
    for (const auto& s : subs) {
        CLI::App* cmd = app.add_subcommand(s.name, s.help);
        add_common_flags(cmd, flags);
        if (std::string(s.name) == "nest")
            cmd->add_option("--mode", flags.mode, "scan mode: restart | frontier");
        if (std::string(s.name) == "permute")
            cmd->add_option("--mode", flags.mode, "pass mode: strict | synthesis");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const CLI::App* cmd = app.get_subcommands().front();
    json cfg = json::object();
    if (int rc = build_config(cmd, flags, cmd->get_name(), cfg); rc != 0) return rc;

    char* manifest = nullptr;
    olab_status st = olab_run(cfg.dump().c_str(), &manifest);
    if (st == OLAB_OK) {
        std::fputs(manifest, stdout);
        olab_string_free(manifest);
        return 0;
    }
    std::fprintf(stderr, "error: %s\n", olab_last_error());
    return st == OLAB_ERR_INTERNAL ? 3 : 2;
}
