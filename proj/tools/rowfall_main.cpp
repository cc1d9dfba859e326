#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "rowfall.h"

namespace {

// Exit codes: 1 bad flags or malformed input, 2 unreadable or unwritable
// files, 3 singular matrix in lu, 4 internal failures.
int exit_code_for(rf_status st) {
    switch (st) {
    case RF_OK:
        return 0;
    case RF_ERR_INVALID_ARGUMENT:
    case RF_ERR_PARSE:
        return 1;
    case RF_ERR_IO:
        return 2;
    case RF_ERR_SINGULAR:
        return 3;
    default:
        return 4;
    }
}

int bail(rf_status st) {
    std::cerr << "rowfall: " << rf_last_error() << "\n";
    return exit_code_for(st);
}

struct Cli {
    std::string input;
    std::string domain = "int";
    std::string pivot; // empty means pick a default for the domain
    int64_t workers = 1;
    int64_t width = 1;
    double gamma = 0.5;
    double epsilon = 1e-10;
    std::string stats_path;
    std::string out_path; // echelon only
};

void add_common(CLI::App* cmd, Cli& cli) {
    cmd->add_option("input", cli.input, "matrix in SMS format")->required();
    cmd->add_option("--domain", cli.domain, "value domain: int, rat, or f64")
        ->check(CLI::IsMember({"int", "rat", "f64"}));
    cmd->add_option("--workers", cli.workers, "worker threads; 1 is sequential")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--width", cli.width, "columns per worker stripe")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--pivot", cli.pivot,
                    "pivot choice: first, sparsest, threshold, or partial "
                    "(default sparsest; threshold for f64)")
        ->check(CLI::IsMember({"first", "sparsest", "threshold", "partial"}));
    cmd->add_option("--gamma", cli.gamma, "threshold eligibility bar in [0,1]");
    cmd->add_option("--epsilon", cli.epsilon, "f64 zero cutoff");
    cmd->add_option("--stats", cli.stats_path, "write per-worker run counters here");
}

rf_domain domain_of(const Cli& cli) {
    if (cli.domain == "rat")
        return RF_DOMAIN_RATIONAL;
    if (cli.domain == "f64")
        return RF_DOMAIN_F64;
    return RF_DOMAIN_INT;
}

rf_options options_of(const Cli& cli) {
    rf_options opts;
    rf_options_init(&opts);
    opts.workers = cli.workers;
    opts.stripe_width = cli.width;
    opts.gamma = cli.gamma;
    opts.epsilon = cli.epsilon;
    std::string pivot = cli.pivot;
    if (pivot.empty())
        pivot = cli.domain == "f64" ? "threshold" : "sparsest";
    if (pivot == "first")
        opts.pivot = RF_PIVOT_FIRST;
    else if (pivot == "threshold")
        opts.pivot = RF_PIVOT_THRESHOLD;
    else if (pivot == "partial")
        opts.pivot = RF_PIVOT_PARTIAL;
    else
        opts.pivot = RF_PIVOT_SPARSEST;
    return opts;
}

// "dir/name.sms" with suffix ".L.sms" becomes "dir/name.L.sms".
std::string sibling_path(const std::string& input, const std::string& suffix) {
    std::filesystem::path p(input);
    return (p.parent_path() / p.stem()).string() + suffix;
}

int write_stats(const Cli& cli, rf_stats* stats) {
    if (cli.stats_path.empty()) {
        rf_stats_free(stats);
        return 0;
    }
    char* json = nullptr;
    rf_status st = rf_stats_json(stats, &json);
    rf_stats_free(stats);
    if (st != RF_OK)
        return bail(st);
    std::ofstream out(cli.stats_path);
    out << json << "\n";
    rf_string_free(json);
    if (!out) {
        std::cerr << "rowfall: cannot write " << cli.stats_path << "\n";
        return 2;
    }
    return 0;
}

int run_rank(const Cli& cli) {
    rf_matrix* m = nullptr;
    rf_status st = rf_matrix_read(cli.input.c_str(), domain_of(cli), &m);
    if (st != RF_OK)
        return bail(st);
    rf_options opts = options_of(cli);
    int64_t rank = 0;
    rf_stats* stats = nullptr;
    st = rf_rank(m, &opts, &rank, cli.stats_path.empty() ? nullptr : &stats);
    rf_matrix_free(m);
    if (st != RF_OK)
        return bail(st);
    std::cout << rank << "\n";
    return write_stats(cli, stats);
}

int run_echelon(const Cli& cli) {
    rf_matrix* m = nullptr;
    rf_status st = rf_matrix_read(cli.input.c_str(), domain_of(cli), &m);
    if (st != RF_OK)
        return bail(st);
    rf_options opts = options_of(cli);
    rf_matrix* ech = nullptr;
    rf_stats* stats = nullptr;
    st = rf_echelon(m, &opts, &ech, cli.stats_path.empty() ? nullptr : &stats);
    rf_matrix_free(m);
    if (st != RF_OK)
        return bail(st);
    if (cli.out_path.empty()) {
        char* text = nullptr;
        st = rf_matrix_format(ech, &text);
        rf_matrix_free(ech);
        if (st != RF_OK)
            return bail(st);
        std::cout << text;
        rf_string_free(text);
    } else {
        st = rf_matrix_write(ech, cli.out_path.c_str());
        rf_matrix_free(ech);
        if (st != RF_OK)
            return bail(st);
    }
    return write_stats(cli, stats);
}

int run_lu(const Cli& cli) {
    rf_matrix* m = nullptr;
    rf_status st = rf_matrix_read(cli.input.c_str(), domain_of(cli), &m);
    if (st != RF_OK)
        return bail(st);
    rf_options opts = options_of(cli);
    rf_lu* lu = nullptr;
    rf_stats* stats = nullptr;
    st = rf_lu_factor(m, &opts, &lu, cli.stats_path.empty() ? nullptr : &stats);
    rf_matrix_free(m);
    if (st != RF_OK)
        return bail(st);

    st = rf_matrix_write(rf_lu_l(lu), sibling_path(cli.input, ".L.sms").c_str());
    if (st == RF_OK)
        st = rf_matrix_write(rf_lu_u(lu), sibling_path(cli.input, ".U.sms").c_str());
    if (st != RF_OK) {
        rf_lu_free(lu);
        return bail(st);
    }

    int64_t count = 0;
    const int64_t* positions = rf_lu_positions(lu, &count);
    std::string perm_path = sibling_path(cli.input, ".perm");
    std::ofstream perm(perm_path);
    for (int64_t i = 0; i < count; ++i)
        perm << positions[i] << "\n";
    rf_lu_free(lu);
    if (!perm) {
        std::cerr << "rowfall: cannot write " << perm_path << "\n";
        return 2;
    }
    return write_stats(cli, stats);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse exact-arithmetic elimination: rank, row echelon form, "
                 "and P*A = L*U factorization of SMS matrices"};
    app.require_subcommand(1);

    Cli cli;
    auto* rank = app.add_subcommand("rank", "print the rank of a matrix");
    add_common(rank, cli);
    auto* echelon = app.add_subcommand("echelon",
                                       "print a row echelon form in SMS format");
    add_common(echelon, cli);
    echelon->add_option("--out", cli.out_path,
                        "write to this file instead of stdout");
    auto* lu = app.add_subcommand("lu", "factor as P*A = L*U; writes "
                                        "<stem>.L.sms, <stem>.U.sms, <stem>.perm");
    add_common(lu, cli);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (rank->parsed())
        return run_rank(cli);
    if (echelon->parsed())
        return run_echelon(cli);
    return run_lu(cli);
}
