// Command line harness: matrix generation, elimination, multiplication and
// the benchmark suites. Exit codes: 0 ok, 1 usage, 2 I/O, 3 verification
// mismatch.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gf2/gf2.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitVerify = 3;

struct verify_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

gf2::BitMatrix load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw gf2::io_error("cannot open " + path);
    return gf2::load_matrix(in);
}

void save_file(const std::string& path, const gf2::BitMatrix& a, const std::string& format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw gf2::io_error("cannot open " + path + " for writing");
    if (format == "ascii")
        gf2::save_ascii(out, a);
    else
        gf2::save_gf2b(out, a);
    if (!out.flush()) throw gf2::io_error("write to " + path + " failed");
}

unsigned parse_k(const std::string& s) {
    if (s == "auto") return 0;
    return unsigned(std::stoul(s));
}

// accepts a decimal table width or the word "auto"
struct KValidator : CLI::Validator {
    KValidator() {
        name_ = "K";
        func_ = [](const std::string& s) -> std::string {
            if (s == "auto") return {};
            try {
                std::size_t pos = 0;
                const unsigned long v = std::stoul(s, &pos);
                if (pos != s.size() || v == 0 || v > 20) return "k must be 1..20 or 'auto'";
            } catch (const std::exception&) {
                return "k must be 1..20 or 'auto'";
            }
            return {};
        };
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// flags every command that runs an algorithm shares
struct CommonOpts {
    std::string strategy;
    std::string k = "auto";
    unsigned tables = 1;
    std::size_t crossover = 0; // bytes; 0 keeps the library default
    std::uint64_t seed = 1;
    bool verify = false;
    bool inject_fault = false;
    std::string format = "gf2b";
    std::string out;
};

void add_tuning_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--k", o.k, "table width in bits, or 'auto'")->check(KValidator());
    cmd->add_option("--tables", o.tables, "Gray tables per stripe")
        ->check(CLI::IsMember({1u, 2u, 4u, 8u}));
    cmd->add_option("--crossover", o.crossover, "bytes below which recursion switches to its base");
}

void add_output_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--out", o.out, "output path");
    cmd->add_option("--format", o.format, "output file format")
        ->check(CLI::IsMember({"gf2b", "ascii"}));
}

gf2::PleConfig ple_config(const CommonOpts& o) {
    gf2::PleConfig cfg;
    cfg.k = parse_k(o.k);
    cfg.table_count = o.tables;
    if (o.crossover > 0) cfg.base_bytes = o.crossover;
    return cfg;
}

gf2::MulConfig mul_config(const CommonOpts& o) {
    gf2::MulConfig cfg;
    cfg.m4rm_k = parse_k(o.k);
    cfg.table_count = o.tables;
    if (o.crossover > 0)
        cfg.strassen_cutoff =
            std::max<std::size_t>(64, std::size_t(std::sqrt(double(o.crossover) * 8.0)));
    return cfg;
}

gf2::EchelonStrategy parse_strategy(const std::string& s) {
    if (s == "naive") return gf2::EchelonStrategy::naive;
    if (s == "m4ri") return gf2::EchelonStrategy::m4ri;
    if (s == "ple-iterative") return gf2::EchelonStrategy::ple_iterative;
    return gf2::EchelonStrategy::ple_recursive;
}

// ---- gen ----------------------------------------------------------------

struct GenOpts {
    std::size_t rows = 0, cols = 0;
    double density = 0.5;
    std::size_t nnz = 0;
    bool use_nnz = false;
    CommonOpts common;
};

int run_gen(const GenOpts& g) {
    gf2::BitMatrix a(g.rows, g.cols);
    if (g.use_nnz)
        gf2::fill_random_rows(a.view(), g.nnz, g.common.seed);
    else
        gf2::fill_random(a.view(), g.density, g.common.seed);
    save_file(g.common.out, a, g.common.format);
    std::cout << "rows " << g.rows << "\ncols " << g.cols << "\n";
    return kExitOk;
}

// ---- echelonize ----------------------------------------------------------

struct EchelonizeOpts {
    std::string input;
    bool ref_only = false;
    CommonOpts common{.strategy = "m4ri"};
};

int run_echelonize(const EchelonizeOpts& e) {
    const gf2::BitMatrix orig = load_file(e.input);
    const bool full = !e.ref_only;
    gf2::BitMatrix work = orig;
    const gf2::PleConfig cfg = ple_config(e.common);

    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t rank = gf2::echelonize(work.view(), parse_strategy(e.common.strategy), full, cfg);
    const double secs = seconds_since(t0);

    if (e.common.inject_fault && work.nrows() > 0 && work.ncols() > 0)
        work.set(0, 0, !work.get(0, 0));

    if (e.common.verify) {
        gf2::BitMatrix naive = orig;
        const std::size_t naive_rank = gf2::naive_echelonize(naive.view(), full);
        const auto other = e.common.strategy == "m4ri" ? gf2::EchelonStrategy::ple_recursive
                                                       : gf2::EchelonStrategy::m4ri;
        gf2::BitMatrix second = orig;
        const std::size_t second_rank = gf2::echelonize(second.view(), other, full, cfg);
        if (rank != naive_rank || rank != second_rank)
            throw verify_error("rank disagreement between strategies");
        if (full && (work != naive || work != second))
            throw verify_error("echelon forms disagree");
    }

    std::cout << "rank " << rank << "\nseconds " << secs << "\n";
    if (!e.common.out.empty()) save_file(e.common.out, work, e.common.format);
    return kExitOk;
}

// ---- ple -----------------------------------------------------------------

struct PleOpts {
    std::string input;
    CommonOpts common{.strategy = "ple-recursive"};
};

int run_ple(const PleOpts& p) {
    const gf2::BitMatrix orig = load_file(p.input);
    gf2::BitMatrix work = orig;
    const gf2::PleConfig cfg = ple_config(p.common);

    const auto t0 = std::chrono::steady_clock::now();
    gf2::PleOutcome out;
    if (p.common.strategy == "naive")
        out = gf2::partial_ple(work.view());
    else if (p.common.strategy == "ple-iterative")
        out = gf2::block_iterative_ple(work.view(), cfg);
    else
        out = gf2::recursive_ple(work.view(), cfg);
    const double secs = seconds_since(t0);

    if (p.common.inject_fault && work.nrows() > 0 && work.ncols() > 0)
        work.set(0, 0, !work.get(0, 0));

    if (p.common.verify) {
        const gf2::BitMatrix l = gf2::extract_l(work.cview(), out);
        const gf2::BitMatrix e = gf2::extract_e(work.cview(), out);
        const gf2::BitMatrix back = gf2::ple_reconstruct(out, l.cview(), e.cview());
        for (std::size_t i = 0; i < out.processed; ++i)
            for (std::size_t w = 0; w < back.stride(); ++w)
                if (back.row_words(i)[w] != orig.row_words(i)[w])
                    throw verify_error("P*L*E does not reproduce the input");
    }

    std::cout << "rank " << out.rank << "\nprocessed " << out.processed << "\nseconds " << secs
              << "\n";
    if (!p.common.out.empty())
        save_file(p.common.out, gf2::extract_e(work.cview(), out), p.common.format);
    return kExitOk;
}

// ---- multiply --------------------------------------------------------------

struct MultiplyOpts {
    std::string a_path, b_path;
    CommonOpts common{.strategy = "auto"};
};

int run_multiply(const MultiplyOpts& m) {
    const gf2::BitMatrix a = load_file(m.a_path);
    const gf2::BitMatrix b = load_file(m.b_path);
    const gf2::MulConfig cfg = mul_config(m.common);

    const auto t0 = std::chrono::steady_clock::now();
    gf2::BitMatrix c(a.nrows(), b.ncols());
    if (m.common.strategy == "naive")
        gf2::mul_naive(c.view(), a.cview(), b.cview());
    else if (m.common.strategy == "m4rm" || m.common.strategy == "m4ri")
        gf2::mul_m4rm(c.view(), a.cview(), b.cview(), cfg);
    else if (m.common.strategy == "strassen")
        gf2::mul_strassen(c.view(), a.cview(), b.cview(), cfg);
    else
        c = gf2::mul(a.cview(), b.cview(), cfg);
    const double secs = seconds_since(t0);

    if (m.common.inject_fault && c.nrows() > 0 && c.ncols() > 0)
        c.set(0, 0, !c.get(0, 0));

    if (m.common.verify && c != gf2::mul_naive(a.cview(), b.cview()))
        throw verify_error("product disagrees with the naive check");

    save_file(m.common.out, c, m.common.format);
    std::cout << "rows " << c.nrows() << "\ncols " << c.ncols() << "\nseconds " << secs << "\n";
    return kExitOk;
}

// ---- bench -----------------------------------------------------------------

struct BenchOpts {
    std::string suite;
    std::vector<std::size_t> sizes{4096};
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
    std::size_t memory_budget = std::size_t(2) << 30;
    CommonOpts common;
};

struct BenchRecord {
    std::string algorithm;
    std::size_t nrows, ncols;
    std::string density;
    unsigned k;
    unsigned tables;
    std::size_t crossover;
    std::uint64_t seed;
    double seconds;
    std::uint64_t row_adds;
    std::size_t rank;
};

void write_csv(std::ostream& out, const std::vector<BenchRecord>& rows) {
    out << "algorithm,nrows,ncols,density,k,tables,crossover,seed,seconds,row_adds,rank\n";
    for (const BenchRecord& r : rows)
        out << r.algorithm << ',' << r.nrows << ',' << r.ncols << ',' << r.density << ',' << r.k
            << ',' << r.tables << ',' << r.crossover << ',' << r.seed << ',' << r.seconds << ','
            << r.row_adds << ',' << r.rank << '\n';
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void print_medians(const std::vector<BenchRecord>& rows) {
    // one summary line per (algorithm, shape, density) cell, to stderr so
    // stdout stays pure CSV
    std::vector<std::string> seen;
    for (const BenchRecord& r : rows) {
        const std::string key = r.algorithm + "|" + std::to_string(r.nrows) + "|" + r.density;
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
        seen.push_back(key);
        std::vector<double> times;
        for (const BenchRecord& s : rows)
            if (s.algorithm == r.algorithm && s.nrows == r.nrows && s.density == r.density)
                times.push_back(s.seconds);
        std::cerr << "median algorithm=" << r.algorithm << " n=" << r.nrows
                  << " density=" << r.density << " seconds=" << median(times) << "\n";
    }
}

void check_budget(std::size_t n, std::size_t budget) {
    const std::size_t bytes = 4 * ((n + 63) / 64 * 8) * n; // matrix plus working copies
    if (bytes > budget) {
        std::ostringstream msg;
        msg << "refusing n=" << n << ": estimated " << bytes << " bytes exceeds --memory-budget "
            << budget;
        throw CLI::ValidationError(msg.str());
    }
}

BenchRecord timed_ple(const gf2::BitMatrix& input, const gf2::PleConfig& cfg,
                      const std::string& name, const std::string& density, std::uint64_t seed,
                      std::size_t crossover, bool full_rref) {
    gf2::BitMatrix work = input;
    gf2::ops::reset_row_additions();
    const auto t0 = std::chrono::steady_clock::now();
    const gf2::PleOutcome out = gf2::recursive_ple(work.view(), cfg);
    if (full_rref) gf2::rref_from_ple(work.view(), out, true, cfg.mul);
    const double secs = seconds_since(t0);
    return {name,     input.nrows(),             input.ncols(), density, cfg.base_k, cfg.table_count,
            crossover, seed,                     secs,          gf2::ops::row_additions(), out.rank};
}

int run_bench(const BenchOpts& b) {
    std::vector<BenchRecord> rows;
    const gf2::PleConfig base_cfg = ple_config(b.common);

    auto generate = [](std::size_t n, std::uint64_t seed, std::size_t nnz) {
        gf2::BitMatrix a(n, n);
        if (nnz == 0)
            gf2::fill_random(a.view(), 0.5, seed);
        else
            gf2::fill_random_rows(a.view(), nnz, seed);
        return a;
    };

    if (b.suite == "table1") {
        // recursion with a striped base case against the same recursion with
        // a one-column (cubic) base case
        for (std::size_t n : b.sizes) {
            check_budget(n, b.memory_budget);
            for (std::uint64_t seed : b.seeds) {
                const gf2::BitMatrix a = generate(n, seed, 0);
                gf2::PleConfig striped = base_cfg;
                striped.base_k = 0;
                rows.push_back(timed_ple(a, striped, "ple-recursive-striped-base", "uniform:0.5",
                                         seed, b.common.crossover, false));
                gf2::PleConfig cubic = base_cfg;
                cubic.base_k = 1;
                rows.push_back(timed_ple(a, cubic, "ple-recursive-cubic-base", "uniform:0.5", seed,
                                         b.common.crossover, false));
            }
        }
    } else if (b.suite == "table2") {
        for (std::size_t n : b.sizes) {
            check_budget(n, b.memory_budget);
            for (std::uint64_t seed : b.seeds) {
                const gf2::BitMatrix a = generate(n, seed, 0);
                {
                    gf2::BitMatrix work = a;
                    gf2::ops::reset_row_additions();
                    const auto t0 = std::chrono::steady_clock::now();
                    const std::size_t rank = gf2::m4ri_echelonize(
                        work.view(), parse_k(b.common.k), true, std::max(1u, b.common.tables));
                    rows.push_back({"m4ri", n, n, "uniform:0.5", parse_k(b.common.k),
                                    b.common.tables, b.common.crossover, seed, seconds_since(t0),
                                    gf2::ops::row_additions(), rank});
                }
                rows.push_back(timed_ple(a, base_cfg, "ple-recursive", "uniform:0.5", seed,
                                         b.common.crossover, true));
            }
        }
    } else { // fig3
        // the sweep times one-sided elimination (PLE decomposition, REF for
        // the table-driven path); a full reduction's cost grows with rank and
        // would drown the sparse-regime behavior the suite is after
        const std::size_t n = b.sizes.front();
        check_budget(n, b.memory_budget);
        for (std::uint64_t seed : b.seeds) {
            const gf2::BitMatrix dense = generate(n, seed, 0);
            rows.push_back(timed_ple(dense, base_cfg, "ple-recursive", "uniform:0.5", seed,
                                     b.common.crossover, false));
            for (std::size_t nnz = 1; nnz <= 20; ++nnz) {
                const gf2::BitMatrix a = generate(n, seed, nnz);
                rows.push_back(timed_ple(a, base_cfg, "ple-recursive",
                                         "nnz:" + std::to_string(nnz), seed, b.common.crossover,
                                         false));
                gf2::BitMatrix work = a;
                gf2::ops::reset_row_additions();
                const auto t0 = std::chrono::steady_clock::now();
                const std::size_t rank = gf2::m4ri_echelonize(work.view(), parse_k(b.common.k),
                                                              false, std::max(1u, b.common.tables));
                rows.push_back({"m4ri", n, n, "nnz:" + std::to_string(nnz), parse_k(b.common.k),
                                b.common.tables, b.common.crossover, seed, seconds_since(t0),
                                gf2::ops::row_additions(), rank});
            }
        }
    }

    if (b.common.out.empty()) {
        write_csv(std::cout, rows);
    } else {
        std::ofstream out(b.common.out);
        if (!out) throw gf2::io_error("cannot open " + b.common.out + " for writing");
        write_csv(out, rows);
        if (!out.flush()) throw gf2::io_error("write to " + b.common.out + " failed");
    }
    print_medians(rows);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dense GF(2) matrix toolkit"};
    app.require_subcommand(1);

    GenOpts gen;
    CLI::App* cmd_gen = app.add_subcommand("gen", "write a random matrix");
    cmd_gen->add_option("--rows", gen.rows, "row count")->required();
    cmd_gen->add_option("--cols", gen.cols, "column count")->required();
    CLI::Option* density_opt =
        cmd_gen->add_option("--density", gen.density, "probability of a 1 per entry")
            ->check(CLI::Range(0.0, 1.0));
    CLI::Option* nnz_opt =
        cmd_gen->add_option("--nnz-per-row", gen.nnz, "exact nonzeros per row instead of density");
    density_opt->excludes(nnz_opt);
    cmd_gen->add_option("--seed", gen.common.seed, "generator seed");
    cmd_gen->add_option("--out", gen.common.out, "output path")->required();
    cmd_gen->add_option("--format", gen.common.format, "output file format")
        ->check(CLI::IsMember({"gf2b", "ascii"}));

    EchelonizeOpts ech;
    CLI::App* cmd_ech = app.add_subcommand("echelonize", "row echelon form and rank");
    cmd_ech->add_option("input", ech.input, "matrix file")->required();
    cmd_ech->add_option("--strategy", ech.common.strategy, "algorithm")
        ->check(CLI::IsMember({"naive", "m4ri", "ple-iterative", "ple-recursive"}));
    cmd_ech->add_flag("--ref", ech.ref_only, "stop at echelon form instead of reducing fully");
    cmd_ech->add_flag("--verify", ech.common.verify, "cross-check against the naive oracle");
    cmd_ech->add_flag("--inject-fault", ech.common.inject_fault,
                      "flip one output bit before verification (testing aid)");
    add_tuning_flags(cmd_ech, ech.common);
    add_output_flags(cmd_ech, ech.common);

    PleOpts ple;
    CLI::App* cmd_ple = app.add_subcommand("ple", "PLE decomposition");
    cmd_ple->add_option("input", ple.input, "matrix file")->required();
    cmd_ple->add_option("--strategy", ple.common.strategy, "algorithm")
        ->check(CLI::IsMember({"naive", "ple-iterative", "ple-recursive"}));
    cmd_ple->add_flag("--verify", ple.common.verify, "reconstruct P*L*E and compare");
    cmd_ple->add_flag("--inject-fault", ple.common.inject_fault,
                      "flip one output bit before verification (testing aid)");
    add_tuning_flags(cmd_ple, ple.common);
    add_output_flags(cmd_ple, ple.common);

    MultiplyOpts mul;
    CLI::App* cmd_mul = app.add_subcommand("multiply", "matrix product");
    cmd_mul->add_option("a", mul.a_path, "left matrix file")->required();
    cmd_mul->add_option("b", mul.b_path, "right matrix file")->required();
    cmd_mul->add_option("--strategy", mul.common.strategy, "kernel")
        ->check(CLI::IsMember({"auto", "naive", "m4rm", "m4ri", "strassen"}));
    cmd_mul->add_flag("--verify", mul.common.verify, "cross-check against the naive product");
    cmd_mul->add_flag("--inject-fault", mul.common.inject_fault,
                      "flip one output bit before verification (testing aid)");
    add_tuning_flags(cmd_mul, mul.common);
    cmd_mul->add_option("--out", mul.common.out, "output path")->required();
    cmd_mul->add_option("--format", mul.common.format, "output file format")
        ->check(CLI::IsMember({"gf2b", "ascii"}));
    cmd_mul->add_option("--seed", mul.common.seed, "unused; accepted for flag compatibility");

    BenchOpts bench;
    CLI::App* cmd_bench = app.add_subcommand("bench", "timing suites, CSV on stdout");
    cmd_bench->add_option("--suite", bench.suite, "which measurement to run")
        ->required()
        ->check(CLI::IsMember({"table1", "table2", "fig3"}));
    cmd_bench->add_option("--sizes", bench.sizes, "square dimensions to measure");
    cmd_bench->add_option("--seeds", bench.seeds, "seed list; cells report the median");
    cmd_bench->add_option("--memory-budget", bench.memory_budget,
                          "refuse runs estimated to need more bytes than this");
    add_tuning_flags(cmd_bench, bench.common);
    cmd_bench->add_option("--out", bench.common.out, "CSV path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    gen.use_nnz = nnz_opt->count() > 0;

    try {
        if (app.got_subcommand(cmd_gen)) return run_gen(gen);
        if (app.got_subcommand(cmd_ech)) return run_echelonize(ech);
        if (app.got_subcommand(cmd_ple)) return run_ple(ple);
        if (app.got_subcommand(cmd_mul)) return run_multiply(mul);
        if (app.got_subcommand(cmd_bench)) return run_bench(bench);
    } catch (const verify_error& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return kExitVerify;
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const gf2::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}
