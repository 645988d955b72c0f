#include "cli_io.hpp"

#include "scram/errors.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace scram::cli {

namespace fs = std::filesystem;

std::string sha256_hex(const std::string& bytes)
{
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

std::string format_double(double x)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

std::uint64_t env_budget(const char* name, std::uint64_t fallback)
{
    const char* raw = std::getenv(name);
    if (!raw || !*raw)
        return fallback;
    std::uint64_t value = 0;
    const std::string_view text(raw);
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw UsageError(std::string(name) + " must be a non-negative integer, got '" + raw + "'");
    return value;
}

fs::path InputFiles::resolve(const std::string& path) const
{
    const fs::path p(path);
    return p.is_absolute() ? p : workdir_ / p;
}

std::string InputFiles::read_text(const std::string& path)
{
    const auto full = resolve(path);
    std::ifstream in(full, std::ios::binary);
    if (!in)
        throw InputError("cannot open " + full.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    auto text = ss.str();
    digests_[path] = sha256_hex(text);
    return text;
}

Json InputFiles::read_json(const std::string& path)
{
    const auto text = read_text(path);
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

ParityCheckMatrix InputFiles::read_alist(const std::string& path)
{
    std::istringstream in(read_text(path));
    try {
        return parse_alist(in);
    } catch (const AlistError& e) {
        throw AlistError(e.line(), e.detail(), path);
    }
}

namespace {

const Json& require(const Json& obj, const char* key, const std::string& where)
{
    if (!obj.is_object())
        throw UsageError(where + " must be a JSON object");
    auto it = obj.find(key);
    if (it == obj.end())
        throw UsageError("missing field '" + std::string(key) + "' in " + where);
    return *it;
}

std::uint64_t as_count(const Json& v, const char* key, const std::string& where)
{
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        throw UsageError("field '" + std::string(key) + "' in " + where + " must be a non-negative integer");
    return v.get<std::uint64_t>();
}

std::uint64_t count_field(const Json& obj, const char* key, const std::string& where)
{
    return as_count(require(obj, key, where), key, where);
}

std::optional<std::uint64_t> optional_count(const Json& obj, const char* key, const std::string& where)
{
    auto it = obj.find(key);
    if (it == obj.end())
        return std::nullopt;
    return as_count(*it, key, where);
}

bool optional_flag(const Json& obj, const char* key, const std::string& where)
{
    auto it = obj.find(key);
    if (it == obj.end())
        return false;
    if (!it->is_boolean())
        throw UsageError("field '" + std::string(key) + "' in " + where + " must be true or false");
    return it->get<bool>();
}

std::string string_field(const Json& obj, const char* key, const std::string& where)
{
    const auto& v = require(obj, key, where);
    if (!v.is_string())
        throw UsageError("field '" + std::string(key) + "' in " + where + " must be a string");
    return v.get<std::string>();
}

std::vector<std::string> code_warnings(const ParityCheckMatrix& h, std::size_t k, const std::string& label)
{
    std::vector<std::string> out;
    for (const auto& d : validate(h)) {
        if (d.is_error())
            throw InputError(label + ": " + d.message);
        out.push_back(label + ": " + d.message);
    }
    const auto dim = h.n_cols() - gf2_rank(h);
    if (k > dim)
        out.push_back(label + ": k = " + std::to_string(k) + " exceeds the code dimension " + std::to_string(dim));
    return out;
}

} // namespace

Json assignment_json(const SlotAssignment& a)
{
    Json slots = Json::array();
    for (const auto& user : a.slots) {
        Json row = Json::array();
        for (auto s : user)
            row.push_back(s + 1);
        slots.push_back(std::move(row));
    }
    return Json{{"slot_base", 1}, {"slots", std::move(slots)}};
}

SlotAssignment assignment_from_json(const Json& j, const std::string& where)
{
    const Json* slots = &j;
    std::uint64_t base = 1;
    if (j.is_object()) {
        slots = &require(j, "slots", where);
        if (auto b = optional_count(j, "slot_base", where))
            base = *b;
        if (base > 1)
            throw UsageError("field 'slot_base' in " + where + " must be 0 or 1");
    }
    if (!slots->is_array())
        throw UsageError("slots in " + where + " must be a list of per-user lists");
    SlotAssignment out;
    for (const auto& user : *slots) {
        if (!user.is_array())
            throw UsageError("slots in " + where + " must be a list of per-user lists");
        std::vector<std::size_t> row;
        for (const auto& s : user) {
            const auto v = as_count(s, "slots", where);
            if (v < base)
                throw InputError(where + ": slot " + std::to_string(v) + " is below the slot base " +
                                 std::to_string(base));
            row.push_back(v - base);
        }
        out.slots.push_back(std::move(row));
    }
    return out;
}

LoadedSystem load_scenario(InputFiles& files, const Json& scenario, const std::string& where,
                           std::optional<std::uint64_t> seed)
{
    LoadedSystem out;
    auto& config = out.config;
    config.n_slots = count_field(scenario, "N_s", where);
    config.with_replacement = optional_flag(scenario, "with_replacement", where);

    const auto& users = require(scenario, "users", where);
    if (!users.is_array() || users.empty())
        throw UsageError("field 'users' in " + where + " must be a non-empty list");

    Json resolved_users = Json::array();
    for (std::size_t i = 0; i < users.size(); ++i) {
        const auto label = where + " users[" + std::to_string(i) + "]";
        const auto& u = users[i];
        const auto path = string_field(u, "alist_path", label);
        const auto k = count_field(u, "k", label);
        const auto repeat = optional_count(u, "repeat", label).value_or(1);
        if (repeat == 0)
            throw UsageError("field 'repeat' in " + label + " must be at least 1");
        auto code = files.read_alist(path);
        if (auto n = optional_count(u, "n", label); n && *n != code.n_cols())
            throw InputError(label + ": n = " + std::to_string(*n) + " but " + path + " has " +
                             std::to_string(code.n_cols()) + " columns");
        if (auto m = optional_count(u, "m", label); m && *m != code.n_rows())
            throw InputError(label + ": m = " + std::to_string(*m) + " but " + path + " has " +
                             std::to_string(code.n_rows()) + " rows");
        for (auto& w : code_warnings(code, k, path))
            out.warnings.push_back(std::move(w));
        for (std::uint64_t r = 0; r < repeat; ++r)
            config.users.push_back({code, k});
        resolved_users.push_back(
            Json{{"alist_path", path}, {"n", code.n_cols()}, {"m", code.n_rows()}, {"k", k}, {"repeat", repeat}});
    }

    std::optional<SlotAssignment> assignment;
    Json assignment_source = nullptr;
    if (auto it = scenario.find("assignment"); it != scenario.end()) {
        assignment = assignment_from_json(*it, where + " assignment");
        assignment_source = "inline";
    } else if (auto p = scenario.find("assignment_path"); p != scenario.end()) {
        if (!p->is_string())
            throw UsageError("field 'assignment_path' in " + where + " must be a string");
        const auto path = p->get<std::string>();
        assignment = assignment_from_json(files.read_json(path), path);
        assignment_source = path;
    }

    if (seed)
        config.seed = *seed;
    else if (assignment)
        config.seed = optional_count(scenario, "seed", where).value_or(0);
    else
        config.seed = count_field(scenario, "seed", where);

    if (!assignment)
        assignment = assign_slots(config);
    out.system = ScramSystem(config, *assignment);

    out.resolved = Json{{"users", std::move(resolved_users)},
                        {"N_s", config.n_slots},
                        {"seed", config.seed},
                        {"with_replacement", config.with_replacement},
                        {"assignment", assignment_source}};
    return out;
}

namespace {

LoadedSystem load_built(InputFiles& files, const std::string& dir)
{
    const auto report_path = (fs::path(dir) / "system.json").string();
    const auto hybrid_path = (fs::path(dir) / "hybrid.alist").string();
    const auto report = files.read_json(report_path);
    const auto& users = require(report, "users", report_path);
    if (!users.is_array() || users.empty())
        throw UsageError("field 'users' in " + report_path + " must be a non-empty list");
    std::vector<std::size_t> symbols, checks, bits;
    for (std::size_t i = 0; i < users.size(); ++i) {
        const auto label = report_path + " users[" + std::to_string(i) + "]";
        symbols.push_back(count_field(users[i], "n", label));
        checks.push_back(count_field(users[i], "m", label));
        bits.push_back(count_field(users[i], "k", label));
    }
    const HybridMatrix hybrid{files.read_alist(hybrid_path), count_field(report, "N_s", report_path)};

    LoadedSystem out;
    out.system = system_from_hybrid(hybrid, symbols, checks, bits);
    out.config.n_slots = hybrid.sa_rows;
    out.config.seed = optional_count(report, "seed", report_path).value_or(0);
    out.config.with_replacement = out.system.with_replacement();
    for (std::size_t u = 0; u < out.system.n_users(); ++u)
        out.config.users.push_back(out.system.user(u));
    out.resolved = Json{{"built_dir", dir}, {"N_s", hybrid.sa_rows}, {"seed", out.config.seed}};
    return out;
}

} // namespace

LoadedSystem load_system(InputFiles& files, const std::string& path, std::optional<std::uint64_t> seed)
{
    if (fs::is_directory(files.resolve(path))) {
        auto out = load_built(files, path);
        if (seed)
            out.resolved["seed_ignored"] = *seed;
        return out;
    }
    return load_scenario(files, files.read_json(path), path, seed);
}

LoadedExperiment load_experiment(InputFiles& files, const std::string& path, std::optional<std::uint64_t> seed)
{
    const auto j = files.read_json(path);
    LoadedExperiment out;

    const auto& scenario = require(j, "scenario", path);
    if (scenario.is_string())
        out.system = load_system(files, scenario.get<std::string>(), std::nullopt);
    else
        out.system = load_scenario(files, scenario, path + " scenario", std::nullopt);

    const auto& snr = require(j, "snr_db", path);
    if (!snr.is_array() || snr.empty())
        throw UsageError("field 'snr_db' in " + path + " must be a non-empty list of numbers");
    for (const auto& s : snr) {
        if (!s.is_number())
            throw UsageError("field 'snr_db' in " + path + " must be a non-empty list of numbers");
        out.per.snr_db.push_back(s.get<double>());
    }
    out.per.frames_per_point = count_field(j, "frames", path);
    out.per.decoder.max_iterations = count_field(j, "max_iters", path);
    if (out.per.frames_per_point == 0)
        throw UsageError("field 'frames' in " + path + " must be at least 1");
    if (out.per.decoder.max_iterations == 0)
        throw UsageError("field 'max_iters' in " + path + " must be at least 1");
    out.per.seed = seed ? *seed : count_field(j, "seed", path);

    std::string fading = "rayleigh";
    if (j.contains("fading"))
        fading = string_field(j, "fading", path);
    if (fading == "unit")
        out.per.channel.fading = Fading::unit;
    else if (fading == "rayleigh")
        out.per.channel.fading = Fading::rayleigh;
    else
        throw UsageError("field 'fading' in " + path + " must be \"unit\" or \"rayleigh\"");

    std::string payload = "random";
    if (j.contains("payload"))
        payload = string_field(j, "payload", path);
    if (payload == "zero")
        out.per.payload = Payload::all_zero_codeword;
    else if (payload == "random")
        out.per.payload = Payload::random_codewords;
    else
        throw UsageError("field 'payload' in " + path + " must be \"zero\" or \"random\"");

    out.per.decoder.hypothesis_budget = env_budget("SCRAM_HYPOTHESIS_BUDGET", out.per.decoder.hypothesis_budget);

    Json snr_list = Json::array();
    for (double s : out.per.snr_db)
        snr_list.push_back(s);
    out.resolved = Json{{"scenario", out.system.resolved},
                        {"snr_db", std::move(snr_list)},
                        {"frames", out.per.frames_per_point},
                        {"max_iters", out.per.decoder.max_iterations},
                        {"seed", out.per.seed},
                        {"fading", fading},
                        {"payload", payload},
                        {"hypothesis_budget", out.per.decoder.hypothesis_budget}};
    return out;
}

} // namespace scram::cli
