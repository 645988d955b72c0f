#include "cli_io.hpp"

#include "scram/cycle_count.hpp"
#include "scram/decoder.hpp"
#include "scram/errors.hpp"
#include "scram/global8.hpp"
#include "scram/rng.hpp"
#include "scram/scram_graph.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#ifndef SCRAM_VERSION
#define SCRAM_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace scram;
using namespace scram::cli;

namespace {

enum Exit { ok = 0, failure = 1, usage = 2, parse = 3, budget = 4, mismatch = 5 };

struct Options {
    std::string format;
    std::optional<std::uint64_t> seed;
    std::string workdir = ".";
    std::string out;
    std::string manifest;
    std::vector<std::string> arguments;
};

/// One command's result: a JSON report and its CSV rendering.
struct Report {
    Json body = Json::object();
    std::string csv;
    Json config = Json::object();
    int exit = ok;
    /// Extra destination for the timed manifest (build-scram output directory).
    std::filesystem::path manifest_copy;
};

Json counts_json(const CycleCounts& counts)
{
    Json out = Json::object();
    for (const auto& [len, n] : counts)
        out[std::to_string(len)] = n;
    return out;
}

Json optional_json(const std::optional<std::size_t>& v)
{
    return v ? Json(*v) : Json(nullptr);
}

Json profile_json(const CycleProfile& p)
{
    return Json{{"girth", optional_json(p.girth)},
                {"acyclic", !p.girth.has_value()},
                {"max_length", p.max_length},
                {"clamped", p.clamped},
                {"counts", counts_json(p.counts)}};
}

std::uint64_t count_at(const CycleCounts& c, std::size_t len)
{
    auto it = c.find(len);
    return it == c.end() ? 0 : it->second;
}

std::optional<std::size_t> parse_max_length(const std::string& text)
{
    if (text.empty())
        return std::nullopt;
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
        v = std::stoul(text, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != text.size() || v < 4)
        throw UsageError("--max-length must be an integer >= 4");
    return v;
}

// ---------------------------------------------------------------------------

Report analyze_ldpc(InputFiles& files, const std::string& path, const std::string& engine,
                    const std::string& max_length_text, std::size_t node)
{
    const auto h = files.read_alist(path);
    Json diagnostics = Json::array();
    for (const auto& d : validate(h)) {
        if (d.is_error())
            throw InputError(path + ": " + d.message);
        diagnostics.push_back(d.message);
    }
    const auto max_length = parse_max_length(max_length_text);
    const auto graph = to_tanner_graph(h);

    CycleProfile profile;
    if (engine == "half")
        profile = count_cycles_half(graph, max_length);
    else if (engine == "full")
        profile = count_cycles_full(graph, max_length);
    else
        profile = count_cycles_oracle(graph, max_length,
                                      env_budget("SCRAM_ORACLE_BUDGET", default_enumeration_budget));

    Report r;
    r.config = Json{{"alist_path", path}, {"engine", engine}, {"max_length", optional_json(max_length)}};
    r.body["code"] = Json{{"alist_path", path},
                          {"n", h.n_cols()},
                          {"m", h.n_rows()},
                          {"nnz", h.nnz()},
                          {"rank", gf2_rank(h)},
                          {"diagnostics", std::move(diagnostics)}};
    r.body["engine"] = engine;
    r.body["profile"] = profile_json(profile);

    std::ostringstream csv;
    csv << "length,count\n";
    for (const auto& [len, n] : profile.counts)
        csv << len << ',' << n << '\n';

    if (node > 0) {
        if (node > h.n_cols())
            throw UsageError("--node must be between 1 and " + std::to_string(h.n_cols()));
        const std::size_t window = profile.max_length >= 4 ? profile.max_length : 4;
        const NodeId id{Side::left, node - 1};
        const auto copies = node_cycle_copies(graph, id, window);
        r.body["node"] = Json{{"variable", node},
                              {"max_length", window},
                              {"monomial_copies", counts_json(copies)},
                              {"cycles", counts_json(count_node_cycles(graph, id, window))}};
    }
    r.csv = csv.str();
    return r;
}

Json system_summary(const LoadedSystem& loaded)
{
    const auto& sys = loaded.system;
    Json users = Json::array();
    for (std::size_t u = 0; u < sys.n_users(); ++u) {
        const auto& code = sys.user(u).code;
        users.push_back(Json{{"n", code.n_cols()}, {"m", code.n_rows()}, {"k", sys.user(u).k}});
    }
    Json histogram = Json::object();
    for (const auto& [deg, n] : collision_histogram(sys))
        histogram[std::to_string(deg)] = n;

    const auto g = scram_girth(sys, env_budget("SCRAM_GIRTH_BUDGET", default_girth_budget));
    Json warnings = Json::array();
    for (const auto& w : loaded.warnings)
        warnings.push_back(w);

    return Json{{"N_u", sys.n_users()},
                {"N_v", sys.n_variables()},
                {"N_l", sys.n_ldpc_checks()},
                {"N_s", sys.n_slots()},
                {"D", channel_load(loaded.config)},
                {"seed", loaded.config.seed},
                {"rng", std::string(Rng::algorithm)},
                {"with_replacement", sys.with_replacement()},
                {"users", std::move(users)},
                {"collision_histogram", std::move(histogram)},
                {"g_local", optional_json(g.local)},
                {"girth",
                 Json{{"g_scram", optional_json(g.girth)},
                      {"global_min", optional_json(g.global_min)},
                      {"bound", g.bound},
                      {"bound_only", g.bound_only}}},
                {"warnings", std::move(warnings)}};
}

std::string key_value_csv(const Json& summary)
{
    std::ostringstream csv;
    csv << "key,value\n";
    for (const auto& [key, value] : summary.items()) {
        if (value.is_structured())
            continue;
        csv << key << ',' << (value.is_number_float() ? format_double(value.get<double>()) : value.dump()) << '\n';
    }
    for (const auto& [deg, n] : summary["collision_histogram"].items())
        csv << "slots_with_" << deg << "_colliders," << n.dump() << '\n';
    for (const auto& [key, value] : summary["girth"].items())
        csv << key << ',' << value.dump() << '\n';
    return csv.str();
}

void write_file(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError("cannot write " + path.string());
    out << text;
}

Report build_scram(InputFiles& files, const std::string& scenario, const std::string& out_dir,
                   std::optional<std::uint64_t> seed)
{
    const auto loaded = load_system(files, scenario, seed);
    const auto summary = system_summary(loaded);

    if (!out_dir.empty()) {
        const auto dir = files.resolve(out_dir);
        fs::create_directories(dir);
        std::ostringstream alist;
        serialize_alist(build_hybrid_matrix(loaded.system).matrix, alist);
        write_file(dir / "hybrid.alist", alist.str());
        Json assignment = assignment_json(loaded.system.assignment());
        assignment["seed"] = loaded.config.seed;
        assignment["rng"] = std::string(Rng::algorithm);
        write_file(dir / "assignment.json", assignment.dump(2) + "\n");
        write_file(dir / "system.json", summary.dump(2) + "\n");
    }

    Report r;
    if (!out_dir.empty())
        r.manifest_copy = files.resolve(out_dir) / "manifest.json";
    r.config = Json{{"scenario", loaded.resolved}, {"out_dir", out_dir}};
    r.body["system"] = summary;
    r.csv = key_value_csv(summary);
    return r;
}

Report count_global8(InputFiles& files, const std::string& source, bool verify, bool per_node,
                     std::optional<std::uint64_t> seed)
{
    const auto loaded = load_system(files, source, seed);
    const auto report = count_global_8cycles(loaded.system);

    Report r;
    r.config = Json{{"system", loaded.resolved}, {"verify", verify}, {"per_node", per_node}};
    r.body["global8"]["total"] = report.total;
    Json pairs = Json::array();
    for (const auto& [users, n] : report.per_user_pair)
        pairs.push_back(Json{{"primary_user", users.first + 1}, {"secondary_user", users.second + 1}, {"cycles", n}});
    r.body["global8"]["per_user_pair"] = std::move(pairs);
    if (per_node)
        r.body["global8"]["per_node"] = report.per_node;

    std::string status = "not_requested";
    Json by_subtraction = nullptr;
    if (verify) {
        Json block;
        try {
            const auto v = verify_against_profile(
                loaded.system, env_budget("SCRAM_PROFILE_BUDGET", default_profile_budget));
            std::uint64_t local8 = 0;
            for (const auto& p : v.users)
                local8 += count_at(p.counts, 8);
            block = Json{{"algorithmic", v.algorithmic},
                         {"hybrid_c6", count_at(v.hybrid.counts, 6)},
                         {"hybrid_c8", count_at(v.hybrid.counts, 8)},
                         {"local_c8", local8}};
            if (v.by_subtraction) {
                by_subtraction = *v.by_subtraction;
                status = v.equal ? "equal" : "unequal";
                if (!v.equal)
                    r.exit = mismatch;
            } else {
                status = "unresolvable";
                block["note"] = v.note;
                r.exit = budget;
            }
        } catch (const BudgetExceeded& e) {
            status = "budget_exceeded";
            block = Json{{"algorithmic", report.total}, {"note", e.what()}};
            r.exit = budget;
        }
        block["by_subtraction"] = by_subtraction;
        block["verdict"] = status;
        r.body["verification"] = std::move(block);
    }

    std::ostringstream csv;
    csv << "total,verdict,by_subtraction\n"
        << report.total << ',' << status << ',' << (by_subtraction.is_null() ? "" : by_subtraction.dump()) << '\n';
    r.csv = csv.str();
    return r;
}

Report cycle_profile(InputFiles& files, const std::string& source, const std::string& max_length_text,
                     std::optional<std::uint64_t> seed)
{
    const auto loaded = load_system(files, source, seed);
    const auto max_length = parse_max_length(max_length_text).value_or(8);
    const auto graph = hybrid_graph(loaded.system);
    const std::uint64_t work = static_cast<std::uint64_t>(graph.left_count()) * graph.edge_count() * max_length;
    const auto limit = env_budget("SCRAM_PROFILE_BUDGET", default_profile_budget);
    if (work > limit)
        throw BudgetExceeded("hybrid profile needs ~" + std::to_string(work) + " message updates, budget is " +
                             std::to_string(limit));

    const auto hybrid = count_cycles_half(graph, max_length);
    Json users = Json::array();
    std::vector<CycleProfile> locals;
    // Lengths at which every local count is known.
    std::size_t resolved_to = hybrid.max_length;
    for (std::size_t u = 0; u < loaded.system.n_users(); ++u) {
        auto p = count_cycles_half(to_tanner_graph(loaded.system.user(u).code), max_length);
        if (p.girth)
            resolved_to = std::min(resolved_to, p.max_length);
        users.push_back(profile_json(p));
        locals.push_back(std::move(p));
    }

    Json rows = Json::array();
    std::ostringstream csv;
    csv << "length,hybrid,local,global\n";
    for (const auto& [len, n] : hybrid.counts) {
        std::uint64_t local = 0;
        for (const auto& p : locals)
            local += count_at(p.counts, len);
        Json row{{"length", len}, {"hybrid", n}};
        if (len <= resolved_to) {
            row["local"] = local;
            row["global"] = static_cast<std::int64_t>(n) - static_cast<std::int64_t>(local);
            csv << len << ',' << n << ',' << local << ',' << row["global"].dump() << '\n';
        } else {
            row["local"] = nullptr;
            row["global"] = nullptr;
            csv << len << ',' << n << ",,\n";
        }
        rows.push_back(std::move(row));
    }

    Report r;
    r.config = Json{{"system", loaded.resolved}, {"max_length", max_length}};
    r.body["hybrid"] = profile_json(hybrid);
    r.body["users"] = std::move(users);
    r.body["by_length"] = std::move(rows);
    r.csv = csv.str();
    return r;
}

Report simulate(InputFiles& files, const std::string& experiment, std::optional<std::uint64_t> seed)
{
    const auto loaded = load_experiment(files, experiment, seed);
    const auto table = run_per_experiment(loaded.system.system, loaded.per);

    Report r;
    r.config = loaded.resolved;
    Json rows = Json::array();
    std::ostringstream csv;
    csv << "snr_db,user,frames,errors,per\n";
    for (const auto& row : table.rows) {
        const Json user = row.user ? Json(*row.user + 1) : Json("all");
        rows.push_back(Json{{"snr_db", row.snr_db},
                            {"user", user},
                            {"frames", row.frames},
                            {"errors", row.errors},
                            {"per", row.per}});
        csv << format_double(row.snr_db) << ',' << (row.user ? std::to_string(*row.user + 1) : "all") << ','
            << row.frames << ',' << row.errors << ',' << format_double(row.per) << '\n';
    }
    r.body["system"] = Json{{"g_local", optional_json(table.local_girth)}, {"global8", table.global8}};
    r.body["per"] = std::move(rows);
    r.csv = csv.str();
    return r;
}

Report generate_code(InputFiles& files, std::size_t n, std::size_t m, std::size_t weight, std::uint64_t seed,
                     const std::string& alist_out)
{
    const auto h = make_random_code(n, m, weight, seed);
    std::ostringstream alist;
    serialize_alist(h, alist);
    write_file(files.resolve(alist_out), alist.str());

    Report r;
    r.config = Json{{"n", n}, {"m", m}, {"column_weight", weight}, {"alist_out", alist_out}};
    const auto g = girth(to_tanner_graph(h));
    r.body["code"] = Json{{"alist_path", alist_out},
                          {"n", n},
                          {"m", m},
                          {"column_weight", weight},
                          {"rank", gf2_rank(h)},
                          {"girth", optional_json(g)},
                          {"sha256", sha256_hex(alist.str())}};
    std::ostringstream csv;
    csv << "n,m,column_weight,rank,girth\n"
        << n << ',' << m << ',' << weight << ',' << gf2_rank(h) << ',' << (g ? std::to_string(*g) : "") << '\n';
    r.csv = csv.str();
    return r;
}

// ---------------------------------------------------------------------------

Json make_manifest(const std::string& command, const Options& opt, const Report& r, const InputFiles& files)
{
    Json inputs = Json::object();
    for (const auto& [path, digest] : files.digests())
        inputs[path] = Json{{"sha256", digest}};
    return Json{{"tool", "scram"},
                {"version", SCRAM_VERSION},
                {"command", command},
                {"arguments", opt.arguments},
                {"config", r.config},
                {"seed", opt.seed ? Json(*opt.seed) : Json(nullptr)},
                {"rng", std::string(Rng::algorithm)},
                {"inputs", std::move(inputs)}};
}

void emit(const std::string& command, const Options& opt, Report& r, const InputFiles& files, double seconds,
          const std::string& default_format)
{
    const auto manifest = make_manifest(command, opt, r, files);
    const auto format = opt.format.empty() ? default_format : opt.format;
    std::string text;
    if (format == "json") {
        Json out = Json{{"manifest", manifest}};
        for (auto& [k, v] : r.body.items())
            out[k] = v;
        text = out.dump(2) + "\n";
    } else {
        text = "# manifest " + manifest.dump() + "\n" + r.csv;
    }
    if (opt.out.empty())
        std::cout << text << std::flush;
    else
        write_file(files.resolve(opt.out), text);

    Json timed = manifest;
    timed["wall_clock_seconds"] = seconds;
    if (!opt.manifest.empty())
        write_file(files.resolve(opt.manifest), timed.dump(2) + "\n");
    if (!r.manifest_copy.empty())
        write_file(r.manifest_copy, timed.dump(2) + "\n");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Cycle analysis and joint decoding for SCRAM random-access systems"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", SCRAM_VERSION);

    Options opt;
    for (int i = 1; i < argc; ++i)
        opt.arguments.emplace_back(argv[i]);

    std::uint64_t seed_value = 0;
    app.add_option("--format", opt.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    auto* seed_opt = app.add_option("--seed", seed_value, "Override the configured seed");
    app.add_option("--workdir", opt.workdir, "Base directory for relative paths");
    app.add_option("--out", opt.out, "Write the report here instead of stdout");
    app.add_option("--manifest", opt.manifest, "Also write the manifest with wall-clock timing here");

    std::string path, engine = "half", max_length, out_dir, alist_out;
    std::size_t node = 0, n = 0, m = 0, weight = 3;
    bool verify = false, per_node = false;

    auto* analyze = app.add_subcommand("analyze-ldpc", "Cycle profile of an LDPC code");
    analyze->add_option("alist", path, "Parity-check matrix in alist format")->required();
    analyze->add_option("--engine", engine, "Counting algorithm")->check(CLI::IsMember({"half", "full", "oracle"}));
    analyze->add_option("--max-length", max_length, "Longest cycle length to count (clamped to 2g-2)");
    analyze->add_option("--node", node, "Also report monomial copies for this variable (1-based)");

    auto* build = app.add_subcommand("build-scram", "Assign slots and write the hybrid matrix");
    build->add_option("scenario", path, "Scenario JSON")->required();
    build->add_option("--out-dir", out_dir, "Directory for assignment.json, hybrid.alist and system.json");

    auto* global8 = app.add_subcommand("count-global8", "Count global 8-cycles");
    global8->add_option("source", path, "Scenario JSON or a build-scram output directory")->required();
    global8->add_flag("--verify", verify, "Check against the cycle-profile difference");
    global8->add_flag("--per-node", per_node, "Include per-variable counts");

    auto* profile = app.add_subcommand("cycle-profile", "Hybrid and per-user cycle profiles");
    profile->add_option("source", path, "Scenario JSON or a build-scram output directory")->required();
    profile->add_option("--max-length", max_length, "Longest cycle length to count (default 8)");

    auto* sim = app.add_subcommand("simulate", "Packet error rate by Monte Carlo simulation");
    sim->add_option("experiment", path, "Experiment JSON")->required();

    auto* gen = app.add_subcommand("generate-code", "Random 4-cycle-free LDPC code");
    gen->add_option("--n", n, "Columns")->required();
    gen->add_option("--m", m, "Rows")->required();
    gen->add_option("--weight", weight, "Column weight");
    gen->add_option("--alist-out", alist_out, "Output alist path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }
    if (*seed_opt)
        opt.seed = seed_value;

    InputFiles files(opt.workdir);
    const auto start = std::chrono::steady_clock::now();
    std::string command;
    try {
        Report r;
        std::string default_format = "json";
        if (analyze->parsed()) {
            command = "analyze-ldpc";
            r = analyze_ldpc(files, path, engine, max_length, node);
        } else if (build->parsed()) {
            command = "build-scram";
            r = build_scram(files, path, out_dir, opt.seed);
        } else if (global8->parsed()) {
            command = "count-global8";
            r = count_global8(files, path, verify, per_node, opt.seed);
        } else if (profile->parsed()) {
            command = "cycle-profile";
            r = cycle_profile(files, path, max_length, opt.seed);
        } else if (sim->parsed()) {
            command = "simulate";
            default_format = "csv";
            r = simulate(files, path, opt.seed);
        } else {
            command = "generate-code";
            r = generate_code(files, n, m, weight, opt.seed.value_or(0), alist_out);
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        emit(command, opt, r, files, seconds, default_format);
        if (r.exit == mismatch)
            std::cerr << "error: global 8-cycle count disagrees with the cycle-profile difference\n";
        else if (r.exit == budget)
            std::cerr << "warning: verification not completed; see the verification block\n";
        return r.exit;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return usage;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return parse;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return budget;
    } catch (const std::length_error& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return budget;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return parse;
    } catch (const std::out_of_range& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return parse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return failure;
    }
}
