// Command-line front end: builds window-constraint acceptors, reports their
// closed-form sizes and language growth, runs stability verification on
// closed-loop matrix pairs, sweeps the compression knob, and generates
// synthetic pairs. All outputs are CSV or DOT, LF-terminated, written to
// --out when given and stdout otherwise.
//
// Exit codes: 0 success (for `verify`: stability certified), 2 input or
// validation error, 3 budget or iteration-cap exhaustion, 10 inconclusive
// verification, 11 verified lower bound at or above one.

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "whtrim/automata.hpp"
#include "whtrim/constraints.hpp"
#include "whtrim/errors.hpp"
#include "whtrim/jsr.hpp"
#include "whtrim/language.hpp"
#include "whtrim/pair_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;
constexpr int kExitInconclusive = 10;
constexpr int kExitLowerBound = 11;

int exit_code_for(whtrim::Verdict v) {
    switch (v) {
        case whtrim::Verdict::CertifiedStable:
            return kExitOk;
        case whtrim::Verdict::Inconclusive:
            return kExitInconclusive;
        case whtrim::Verdict::LowerBoundAtLeastOne:
            return kExitLowerBound;
    }
    return kExitInput;
}

[[noreturn]] void die(int code, const std::string& message) {
    std::cerr << "whtrim: " << message << "\n";
    std::exit(code);
}

// The state budget guards automaton construction; the environment override
// lets batch jobs raise or lower it without touching command lines.
unsigned long long state_budget_from_env() {
    const char* raw = std::getenv("WHTRIM_STATE_BUDGET");
    if (raw == nullptr || *raw == '\0') return whtrim::kDefaultStateBudget;
    char* end = nullptr;
    errno = 0;
    unsigned long long value = std::strtoull(raw, &end, 10);
    if (errno != 0 || end == raw || *end != '\0' || value == 0)
        die(kExitInput,
            std::string("WHTRIM_STATE_BUDGET must be a positive integer, got \"") +
                raw + "\"");
    return value;
}

// A parsed constraint-or-acceptor request: `anymiss:m:k`, `anyhit:h:k`, or
// `trim:m:k:c`. The original text is kept for echoing into CSV columns.
struct AcceptorSpec {
    std::string text;
    bool trimmed = false;
    int m = 0;
    int k = 0;
    int c = 0;
};

int parse_spec_int(const std::string& field, const std::string& whole) {
    if (field.empty() || field.find_first_not_of("0123456789") != std::string::npos)
        die(kExitInput, "bad number \"" + field + "\" in constraint \"" + whole + "\"");
    errno = 0;
    long value = std::strtol(field.c_str(), nullptr, 10);
    if (errno != 0 || value > 1000000000l)
        die(kExitInput, "number out of range in constraint \"" + whole + "\"");
    return static_cast<int>(value);
}

AcceptorSpec parse_acceptor_spec(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    parts.push_back(cur);

    AcceptorSpec spec;
    spec.text = text;
    if (parts.size() == 3 && (parts[0] == "anymiss" || parts[0] == "anyhit")) {
        int first = parse_spec_int(parts[1], text);
        int k = parse_spec_int(parts[2], text);
        whtrim::WeaklyHardConstraint c = parts[0] == "anymiss"
                                             ? whtrim::any_miss(first, k)
                                             : whtrim::any_hit(first, k);
        spec.m = c.miss_budget();
        spec.k = c.k;
        return spec;
    }
    if (parts.size() == 4 && parts[0] == "trim") {
        spec.trimmed = true;
        spec.m = parse_spec_int(parts[1], text);
        spec.k = parse_spec_int(parts[2], text);
        spec.c = parse_spec_int(parts[3], text);
        return spec;
    }
    die(kExitInput,
        "constraint \"" + text +
            "\" not understood; want anymiss:m:k, anyhit:h:k, or trim:m:k:c");
}

whtrim::Automaton build_acceptor(const AcceptorSpec& spec,
                                 unsigned long long budget) {
    if (spec.trimmed) return whtrim::build_compressed(spec.m, spec.k, spec.c, budget);
    return whtrim::build_minimal(spec.m, spec.k, budget);
}

// Writes to --out when set, stdout otherwise. Kept tiny on purpose: every
// command funnels its artifact through exactly one sink so re-runs stay
// byte-identical.
class Sink {
  public:
    explicit Sink(const std::string& path) : path_(path) {
        if (!path_.empty()) {
            file_.open(path_, std::ios::binary);
            if (!file_) die(kExitInput, "cannot open output file " + path_);
        }
    }
    std::ostream& stream() { return path_.empty() ? std::cout : file_; }
    // A second artifact stream (label sidecars) only makes sense on disk.
    bool on_disk() const { return !path_.empty(); }
    const std::string& path() const { return path_; }

  private:
    std::string path_;
    std::ofstream file_;
};

std::string fmt_double(const char* format, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, value);
    return buf;
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char ch : field) {
        quoted.push_back(ch);
        if (ch == '"') quoted.push_back('"');
    }
    quoted.push_back('"');
    return quoted;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) die(kExitInput, "cannot open output file " + path);
    out << content;
}

// ---------------------------------------------------------------- build --

struct BuildArgs {
    int m = 0, k = 0;
    int c = -1;  // -1: exact acceptor, no compression
    std::string format;
    std::string out;
};

int cmd_build(const BuildArgs& args) {
    unsigned long long budget = state_budget_from_env();
    whtrim::Automaton a =
        args.c < 0 ? whtrim::build_minimal(args.m, args.k, budget)
                   : whtrim::build_compressed(args.m, args.k, args.c, budget);

    std::size_t transitions = 0;
    for (const auto& row : a.next)
        for (int sym = 0; sym < 2; ++sym)
            if (row[static_cast<std::size_t>(sym)] >= 0) ++transitions;

    if (!args.format.empty()) {
        Sink sink(args.out);
        if (args.format == "dot") {
            sink.stream() << whtrim::to_dot(a);
        } else {  // csv
            sink.stream() << whtrim::transitions_csv(a);
            if (sink.on_disk())
                write_file(sink.path() + ".labels.csv", whtrim::labels_csv(a));
        }
    }

    // The summary goes to stdout unless the artifact already owns it.
    std::ostream& summary =
        (!args.format.empty() && args.out.empty()) ? std::cerr : std::cout;
    summary << "states=" << a.size() << " transitions=" << transitions << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- stats --

struct StatsArgs {
    int m = 0, k = 0;
    int c_min = 1;
    int c_max = -1;  // default: k - m
    std::string out;
};

int cmd_stats(const StatsArgs& args) {
    int c_max = args.c_max < 0 ? args.k - args.m : args.c_max;
    if (args.c_min < 1 || c_max < args.c_min || c_max > args.k - args.m)
        die(kExitInput, "need 1 <= c-min <= c-max <= k-m");
    Sink sink(args.out);
    sink.stream() << "c,states\n";
    for (int c = args.c_min; c <= c_max; ++c)
        sink.stream() << c << ","
                      << whtrim::state_count(args.m, args.k, c).str() << "\n";
    return kExitOk;
}

// --------------------------------------------------------------- growth --

int cmd_growth(const std::vector<std::string>& specs, const std::string& out) {
    unsigned long long budget = state_budget_from_env();
    // Validate every spec before emitting a single byte, so a typo in the
    // last argument cannot leave a half-written header behind.
    std::vector<AcceptorSpec> parsed;
    for (const std::string& text : specs) {
        AcceptorSpec spec = parse_acceptor_spec(text);
        whtrim::state_count(spec.m, spec.k, spec.trimmed ? spec.c : 1);
        parsed.push_back(spec);
    }
    Sink sink(out);
    sink.stream() << "constraint,states,a,lambda\n";
    for (const AcceptorSpec& spec : parsed) {
        whtrim::Automaton a = build_acceptor(spec, budget);
        whtrim::GrowthEstimate g = whtrim::growth(a);
        sink.stream() << csv_quote(spec.text) << "," << a.size() << ","
                      << fmt_double("%.3f", g.a) << ","
                      << fmt_double("%.3f", g.lambda) << "\n";
    }
    return kExitOk;
}

// --------------------------------------------------------------- verify --

struct VerifyArgs {
    std::string pair_path;
    std::string constraint;
    double delta = 1e-3;
    int max_iterations = 100;
    unsigned long long entry_budget = 1'000'000'000ull;
    std::string representation = "factored";
    std::string trace;
    std::string out;
};

whtrim::Representation parse_representation(const std::string& name) {
    if (name == "factored") return whtrim::Representation::Factored;
    if (name == "explicit") return whtrim::Representation::Explicit;
    die(kExitInput, "representation must be factored or explicit, got \"" + name + "\"");
}

void write_trace(const std::string& path, const whtrim::JsrResult& result) {
    std::ostringstream text;
    text << "iter,space,time\n";
    for (const auto& rec : result.history)
        text << rec.iteration << "," << rec.stored_entries.str() << ","
             << fmt_double("%.6f", rec.seconds) << "\n";
    write_file(path, text.str());
}

void write_verify_row(std::ostream& os, const whtrim::ClosedLoopPair& pair,
                      const std::string& constraint, std::size_t states,
                      const whtrim::JsrResult& result) {
    os << "name,constraint,states,verdict,lower,upper,iterations,"
          "stored_entries,representation,delta\n";
    os << csv_quote(pair.name) << "," << csv_quote(constraint) << "," << states
       << "," << whtrim::to_string(result.verdict) << ","
       << fmt_double("%.12g", result.lower) << ","
       << fmt_double("%.12g", result.upper) << "," << result.iterations << ","
       << result.stored_entries.str() << ","
       << whtrim::to_string(result.representation) << ","
       << fmt_double("%.12g", result.delta) << "\n";
}

int cmd_verify(const VerifyArgs& args) {
    whtrim::VerifyOptions options;
    options.delta = args.delta;
    options.max_iterations = args.max_iterations;
    options.entry_budget = whtrim::BigInt(args.entry_budget);
    options.representation = parse_representation(args.representation);
    options.state_budget = state_budget_from_env();

    whtrim::ClosedLoopPair pair = whtrim::load_pair(args.pair_path);
    AcceptorSpec spec = parse_acceptor_spec(args.constraint);
    whtrim::Automaton acceptor =
        spec.trimmed
            ? whtrim::build_compressed(spec.m, spec.k, spec.c, options.state_budget)
            : whtrim::build_isomorphic(spec.m, spec.k, options.state_budget);

    whtrim::JsrResult result = whtrim::verify_stability(pair, acceptor, options);

    Sink sink(args.out);
    write_verify_row(sink.stream(), pair, args.constraint, acceptor.size(), result);
    if (!args.trace.empty()) write_trace(args.trace, result);
    return exit_code_for(result.verdict);
}

// ---------------------------------------------------------------- sweep --

struct SweepArgs {
    std::string pair_path;
    int m = 0, k = 0;
    int c_min = 1;
    int c_max = -1;
    double delta = 1e-3;
    int max_iterations = 100;
    unsigned long long entry_budget = 1'000'000'000ull;
    std::string representation = "factored";
    unsigned jobs = 0;  // 0: one per hardware thread
    std::string out;
};

struct SweepRow {
    int c;
    std::string states;
    std::string verdict;
    std::string lower;
    std::string upper;
    std::string iterations;
    std::string stored;
    std::string error;
};

int cmd_sweep(const SweepArgs& args) {
    whtrim::VerifyOptions options;
    options.delta = args.delta;
    options.max_iterations = args.max_iterations;
    options.entry_budget = whtrim::BigInt(args.entry_budget);
    options.representation = parse_representation(args.representation);
    options.state_budget = state_budget_from_env();

    whtrim::ClosedLoopPair pair = whtrim::load_pair(args.pair_path);
    int c_max = args.c_max < 0 ? args.k - args.m : args.c_max;
    if (args.m < 1 || args.k <= args.m)
        die(kExitInput, "need 1 <= m < k");
    if (args.c_min < 1 || c_max < args.c_min || c_max > args.k - args.m)
        die(kExitInput, "need 1 <= c-min <= c-max <= k-m");

    auto run_one = [&](int c) -> SweepRow {
        SweepRow row;
        row.c = c;
        try {
            whtrim::Automaton acceptor =
                whtrim::build_compressed(args.m, args.k, c, options.state_budget);
            row.states = std::to_string(acceptor.size());
            whtrim::JsrResult result =
                whtrim::verify_stability(pair, acceptor, options);
            row.verdict = whtrim::to_string(result.verdict);
            row.lower = fmt_double("%.12g", result.lower);
            row.upper = fmt_double("%.12g", result.upper);
            row.iterations = std::to_string(result.iterations);
            row.stored = result.stored_entries.str();
        } catch (const whtrim::Error& e) {
            row.error = e.what();
        }
        return row;
    };

    // Per-c verifications are independent; run them on a bounded window of
    // worker threads and emit rows in ascending c regardless of completion
    // order, so output bytes never depend on scheduling.
    unsigned jobs = args.jobs != 0 ? args.jobs
                                   : std::max(1u, std::thread::hardware_concurrency());
    std::vector<int> cs;
    for (int c = args.c_min; c <= c_max; ++c) cs.push_back(c);
    std::vector<SweepRow> rows(cs.size());
    std::size_t launched = 0, drained = 0;
    std::vector<std::future<SweepRow>> inflight(cs.size());
    while (drained < cs.size()) {
        while (launched < cs.size() && launched - drained < jobs) {
            inflight[launched] =
                std::async(std::launch::async, run_one, cs[launched]);
            ++launched;
        }
        rows[drained] = inflight[drained].get();
        ++drained;
    }

    Sink sink(args.out);
    sink.stream() << "c,states,verdict,lower,upper,iterations,stored_entries,error\n";
    for (const SweepRow& row : rows)
        sink.stream() << row.c << "," << row.states << "," << row.verdict << ","
                      << row.lower << "," << row.upper << "," << row.iterations
                      << "," << row.stored << "," << csv_quote(row.error) << "\n";
    return kExitOk;
}

// ------------------------------------------------------------------ gen --

struct GenArgs {
    std::uint64_t seed = 1;
    int dim = 2;
    double target_sr = 0.8;
    std::string strategy = "hold";
    std::string out;
};

int cmd_gen(const GenArgs& args) {
    whtrim::MissStrategy strategy;
    if (args.strategy == "hold") {
        strategy = whtrim::MissStrategy::Hold;
    } else if (args.strategy == "zero") {
        strategy = whtrim::MissStrategy::Zero;
    } else {
        die(kExitInput, "strategy must be hold or zero, got \"" + args.strategy + "\"");
    }
    whtrim::ClosedLoopPair pair =
        whtrim::generate_pair(args.seed, args.dim, args.target_sr, strategy);
    if (args.out.empty()) {
        std::cout << whtrim::pair_to_json(pair);
    } else {
        whtrim::save_pair(pair, args.out);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "whtrim: window-constraint acceptors, language growth, and switched-"
        "system stability certificates"};
    app.require_subcommand(1);

    BuildArgs build_args;
    CLI::App* build = app.add_subcommand(
        "build", "Construct an acceptor and emit it as DOT or CSV");
    build->add_option("--m", build_args.m, "miss budget per window")->required();
    build->add_option("--k", build_args.k, "window length")->required();
    build->add_option("--c", build_args.c, "compression spacing (omit for exact)");
    build->add_option("--format", build_args.format, "artifact format")
        ->check(CLI::IsMember({"dot", "csv"}));
    build->add_option("--out", build_args.out, "artifact path (default stdout)");

    StatsArgs stats_args;
    CLI::App* stats = app.add_subcommand(
        "stats", "Closed-form state counts over a compression range");
    stats->add_option("--m", stats_args.m, "miss budget per window")->required();
    stats->add_option("--k", stats_args.k, "window length")->required();
    stats->add_option("--c-min", stats_args.c_min, "first spacing (default 1)");
    stats->add_option("--c-max", stats_args.c_max, "last spacing (default k-m)");
    stats->add_option("--out", stats_args.out, "CSV path (default stdout)");

    std::vector<std::string> growth_specs;
    std::string growth_out;
    CLI::App* growth = app.add_subcommand(
        "growth", "Word-count growth constants per constraint");
    growth->add_option("specs", growth_specs,
                       "constraints (anymiss:m:k, anyhit:h:k, trim:m:k:c)")
        ->required();
    growth->add_option("--out", growth_out, "CSV path (default stdout)");

    VerifyArgs verify_args;
    CLI::App* verify = app.add_subcommand(
        "verify", "Certify closed-loop stability under a constraint");
    verify->add_option("--pair", verify_args.pair_path, "pair JSON file")->required();
    verify->add_option("--constraint", verify_args.constraint,
                       "anymiss:m:k, anyhit:h:k, or trim:m:k:c")
        ->required();
    verify->add_option("--delta", verify_args.delta, "pruning slack (default 1e-3)");
    verify->add_option("--max-iterations", verify_args.max_iterations,
                       "depth cap (default 100)");
    verify->add_option("--entry-budget", verify_args.entry_budget,
                       "stored-entry cap (default 1e9)");
    verify->add_option("--representation", verify_args.representation,
                       "factored or explicit")
        ->check(CLI::IsMember({"factored", "explicit"}));
    verify->add_option("--trace", verify_args.trace,
                       "per-iteration CSV (iter,space,time); the time column "
                       "is wall-clock and not reproducible");
    verify->add_option("--out", verify_args.out, "result CSV path (default stdout)");

    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "Verify one pair across a compression range");
    sweep->add_option("--pair", sweep_args.pair_path, "pair JSON file")->required();
    sweep->add_option("--m", sweep_args.m, "miss budget per window")->required();
    sweep->add_option("--k", sweep_args.k, "window length")->required();
    sweep->add_option("--c-min", sweep_args.c_min, "first spacing (default 1)");
    sweep->add_option("--c-max", sweep_args.c_max, "last spacing (default k-m)");
    sweep->add_option("--delta", sweep_args.delta, "pruning slack (default 1e-3)");
    sweep->add_option("--max-iterations", sweep_args.max_iterations,
                      "depth cap (default 100)");
    sweep->add_option("--entry-budget", sweep_args.entry_budget,
                      "stored-entry cap (default 1e9)");
    sweep->add_option("--representation", sweep_args.representation,
                      "factored or explicit")
        ->check(CLI::IsMember({"factored", "explicit"}));
    sweep->add_option("--jobs", sweep_args.jobs,
                      "parallel verifications (default: hardware threads)");
    sweep->add_option("--out", sweep_args.out, "CSV path (default stdout)");

    GenArgs gen_args;
    CLI::App* gen = app.add_subcommand(
        "gen", "Generate a deterministic synthetic closed-loop pair");
    gen->add_option("--seed", gen_args.seed, "generator seed")->required();
    gen->add_option("--dim", gen_args.dim, "state dimension (1..10)")->required();
    gen->add_option("--target-sr", gen_args.target_sr,
                    "spectral radius of the hit-mode matrix (0, 1.1)")
        ->required();
    gen->add_option("--strategy", gen_args.strategy, "hold or zero")
        ->check(CLI::IsMember({"hold", "zero"}));
    gen->add_option("--out", gen_args.out, "pair JSON path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    try {
        if (build->parsed()) return cmd_build(build_args);
        if (stats->parsed()) return cmd_stats(stats_args);
        if (growth->parsed()) return cmd_growth(growth_specs, growth_out);
        if (verify->parsed()) return cmd_verify(verify_args);
        if (sweep->parsed()) return cmd_sweep(sweep_args);
        if (gen->parsed()) return cmd_gen(gen_args);
    } catch (const whtrim::StateBudgetExceeded& e) {
        die(kExitBudget, e.what());
    } catch (const whtrim::SizeBudgetExceeded& e) {
        die(kExitBudget, e.what());
    } catch (const whtrim::LimitExceeded& e) {
        die(kExitBudget, e.what());
    } catch (const whtrim::NoConvergence& e) {
        die(kExitBudget, e.what());
    } catch (const whtrim::Error& e) {
        die(kExitInput, e.what());
    }
    return kExitInput;  // unreachable: require_subcommand(1) guarantees a branch
}
