// eva: demos, precision sweeps, tamper-injection tests, communication audits
// and the vertically-partitioned regression pipeline, with JSON reports.

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "eva/bench.hpp"
#include "eva/csv.hpp"
#include "eva/linalg.hpp"
#include "eva/metrics.hpp"

using json = nlohmann::json;
using namespace eva;
using Clock = std::chrono::steady_clock;

namespace {

int log_level() {
    const char* env = std::getenv("EVA_LOG");
    if (!env) return 0;
    const std::string v(env);
    if (v == "debug" || v == "2") return 2;
    if (v == "info" || v == "1") return 1;
    return 0;
}

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void emit(const json& report, const std::string& out_path) {
    const std::string text = report.dump(2);
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw DegenerateInputError("cannot write report to " + out_path);
        out << text << "\n";
    }
    std::cout << text << std::endl;
}

json stats_json(const SessionStats& stats) {
    auto dir = [](const DirectedStats& d) {
        return json{{"payload_bytes", d.payload_bytes},
                    {"header_bytes", d.header_bytes},
                    {"messages", d.messages}};
    };
    return json{{"rounds", stats.rounds()},
                {"payload_bytes", stats.payload_bytes()},
                {"header_bytes", stats.total.header_bytes},
                {"phases",
                 {{"preprocess", dir(stats.preprocess)},
                  {"online", dir(stats.online)},
                  {"verify", dir(stats.verify)}}}};
}

AddressBook parse_binds(const std::vector<std::string>& binds) {
    AddressBook book;
    for (const auto& b : binds) {
        const auto eq = b.find('=');
        const auto colon = b.rfind(':');
        if (eq == std::string::npos || colon == std::string::npos || colon < eq) {
            throw DegenerateInputError("bad --bind '" + b + "', expected ROLE=HOST:PORT");
        }
        const std::string role_s = b.substr(0, eq);
        const std::string host = b.substr(eq + 1, colon - eq - 1);
        const int port = std::stoi(b.substr(colon + 1));
        Role role;
        if (role_s == "alice") role = Role::Alice;
        else if (role_s == "bob") role = Role::Bob;
        else if (role_s == "carol") role = Role::Carol;
        else if (role_s == "cs") role = Role::CommodityServer;
        else throw DegenerateInputError("unknown role '" + role_s + "'");
        book[role] = NodeAddress{host, static_cast<std::uint16_t>(port)};
    }
    return book;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
    return out;
}

struct SyntheticData {
    Matrix features;
    Matrix labels;
    Matrix beta_true;
};

SyntheticData synthesize(std::size_t n, std::size_t m, std::uint64_t seed) {
    RngStream rng(seed, 0xDA7A);
    SyntheticData d;
    d.features = Matrix(n, m);
    for (double& v : d.features.data()) v = rng.normal();
    d.beta_true = Matrix(m + 1, 1);
    for (double& v : d.beta_true.data()) v = rng.uniform(-3.0, 3.0);
    d.labels = Matrix(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        double y = d.beta_true(0, 0);  // intercept
        for (std::size_t j = 0; j < m; ++j) y += d.features(i, j) * d.beta_true(j + 1, 0);
        d.labels(i, 0) = y + 0.01 * rng.normal();
    }
    return d;
}

DimSpec parse_dims(const std::string& csv, std::size_t fallback_n) {
    if (csv.empty()) return DimSpec{fallback_n, fallback_n, fallback_n, fallback_n};
    const auto parts = parse_int_list(csv);
    if (parts.size() != 4) {
        throw DegenerateInputError("--dims expects four comma-separated counts n,s,t,m");
    }
    for (int v : parts) {
        if (v < 1) throw DegenerateInputError("--dims entries must be positive");
    }
    return DimSpec{static_cast<std::size_t>(parts[0]), static_cast<std::size_t>(parts[1]),
                   static_cast<std::size_t>(parts[2]), static_cast<std::size_t>(parts[3])};
}

int cmd_demo(const std::string& protocol, std::size_t n, const std::string& dims_csv, int delta,
             std::uint64_t seed, std::size_t rounds, const std::string& transport,
             const std::vector<std::string>& binds, bool force_singular,
             const std::string& out_path) {
    RunOptions opts;
    opts.seed = seed;
    opts.range = DynamicRange(delta);
    opts.verify.rounds = rounds;
    if (transport == "tcp") {
        opts.backend = Backend::Tcp;
        opts.addresses = parse_binds(binds);
    }
    if (log_level() >= 2 && opts.backend == Backend::Inproc) {
        opts.observer = [](const Envelope& e) {
            std::cerr << "step " << e.step << "  " << role_name(e.sender) << " -> "
                      << role_name(e.receiver) << "  " << e.payload_bytes() << " B\n";
        };
    }

    const ProtocolKind kind = protocol_from_name(protocol);
    RngStream rng(seed, 0xD390);
    const DimSpec dims = parse_dims(dims_csv, n);
    TrialCase trial = make_trial(kind, dims, opts.range, rng);
    if (force_singular) {
        if (kind != ProtocolKind::S2PI) {
            throw DegenerateInputError("--singular only applies to s2pi");
        }
        trial.operands[1] = -1.0 * trial.operands[0];  // A + B = 0
    }
    const auto t0 = Clock::now();
    const ProtocolRun run = run_protocol(kind, trial, opts);
    const double wall = ms_since(t0);
    const double err = rel_frobenius_error(run.sum, trial.expected);

    json report{{"command", "demo"},  {"protocol", protocol},
                {"n", n},             {"dims", dims_csv.empty() ? json() : json(dims_csv)},
                {"delta", delta},
                {"seed", seed},       {"verify_rounds", rounds},
                {"transport", transport}, {"accepted", run.accepted},
                {"rel_error", err},   {"wall_ms", wall}};
    report.update(stats_json(run.stats));
    emit(report, out_path);
    return run.accepted && err < 1e-3 ? 0 : 1;
}

int cmd_precision(const std::string& protocol, const std::string& n_list,
                  const std::string& delta_list, std::size_t trials, std::uint64_t seed,
                  std::size_t rounds, const std::string& out_path) {
    const ProtocolKind kind = protocol_from_name(protocol);
    json cells = json::array();
    bool pass = true;
    for (int n : parse_int_list(n_list)) {
        for (int delta : parse_int_list(delta_list)) {
            const PrecisionCell cell =
                precision_cell(kind, static_cast<std::size_t>(n), delta, trials, seed, rounds);
            if (log_level() >= 1) {
                std::cerr << protocol << " n=" << n << " delta=" << delta
                          << " mre=" << cell.mre << " fail=" << cell.failure_rate << "\n";
            }
            cells.push_back({{"n", cell.n},
                             {"delta", cell.delta},
                             {"trials", cell.trials},
                             {"mre", cell.mre},
                             {"worst_rel_frobenius", cell.worst_frob},
                             {"failure_rate", cell.failure_rate}});
            pass = pass && cell.failure_rate == 0.0;
        }
    }
    json report{{"command", "precision"}, {"protocol", protocol}, {"trials", trials},
                {"seed", seed},           {"cells", cells},       {"pass", pass}};
    emit(report, out_path);
    return pass ? 0 : 1;
}

int cmd_tamper(const std::string& protocol, std::size_t n, int delta, std::size_t trials,
               std::uint64_t seed, const std::string& out_path) {
    const ProtocolKind kind = protocol_from_name(protocol);
    json levels = json::array();
    bool pass = true;
    for (std::size_t l : {std::size_t{1}, std::size_t{5}, std::size_t{20}}) {
        const TamperReport rep = tamper_sweep(kind, n, delta, trials, l, seed);
        levels.push_back({{"verify_rounds", l},
                          {"trials", rep.trials},
                          {"detected", rep.detected},
                          {"rate", rep.rate},
                          {"wilson_low_99", rep.wilson_low}});
        if (l == 20) pass = pass && rep.detected == rep.trials;
        if (l == 1) pass = pass && rep.wilson_low > 0.48;
    }
    json report{{"command", "tamper"}, {"protocol", protocol}, {"n", n},
                {"delta", delta},      {"trials", trials},     {"seed", seed},
                {"levels", levels},    {"pass", pass}};
    emit(report, out_path);
    return pass ? 0 : 1;
}

int cmd_comm_audit(const std::string& n_list, std::uint64_t seed, const std::string& out_path) {
    json sections = json::array();
    bool pass = true;
    for (int n : parse_int_list(n_list)) {
        json rows = json::array();
        for (const AuditRow& row : comm_audit(static_cast<std::size_t>(n), seed)) {
            rows.push_back({{"protocol", row.protocol},
                            {"rounds", row.rounds},
                            {"rounds_expected", row.rounds_expected},
                            {"payload_bytes", row.payload},
                            {"payload_expected", row.payload_expected},
                            {"pass", row.pass}});
            pass = pass && row.pass;
        }
        sections.push_back({{"n", n}, {"rows", rows}});
    }
    json report{{"command", "comm_audit"}, {"n_list", n_list}, {"seed", seed},
                {"sections", sections},    {"pass", pass}};
    emit(report, out_path);
    return pass ? 0 : 1;
}

int cmd_regress(const std::string& csv_path, const std::string& label, std::size_t n,
                std::size_t m, double test_frac, std::uint64_t seed,
                const std::string& out_path) {
    Matrix features, labels;
    std::string source;
    if (!csv_path.empty()) {
        const CsvTable table = read_csv(csv_path);
        const std::size_t label_col = table.column(label);
        features = table.drop_column(label_col);
        labels = table.take_column(label_col);
        source = csv_path;
    } else {
        const SyntheticData d = synthesize(n, m, seed);
        features = d.features;
        labels = d.labels;
        source = "synthetic";
    }

    // Seeded shuffle, then an head/tail train/test split.
    const std::size_t total = features.rows();
    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), 0);
    RngStream shuffle_rng(seed, 0x5095);
    for (std::size_t i = total; i > 1; --i) {
        std::swap(order[i - 1], order[shuffle_rng.uniform_int(i)]);
    }
    const std::size_t n_test = std::max<std::size_t>(1, static_cast<std::size_t>(
                                                            test_frac * static_cast<double>(total)));
    const std::size_t n_train = total - n_test;
    if (n_train < features.cols() + 2) {
        throw DegenerateInputError("regress: too few training rows for the feature count");
    }
    auto take_rows = [&](std::size_t from, std::size_t count, const Matrix& src) {
        Matrix out(count, src.cols());
        for (std::size_t i = 0; i < count; ++i) {
            for (std::size_t j = 0; j < src.cols(); ++j) out(i, j) = src(order[from + i], j);
        }
        return out;
    };
    const Matrix x_train_raw = take_rows(0, n_train, features);
    const Matrix x_test_raw = take_rows(n_train, n_test, features);
    const Matrix y_train = take_rows(0, n_train, labels);
    const Matrix y_test = take_rows(n_train, n_test, labels);

    const StandardizeParams std_params = standardize_fit(x_train_raw);
    const Matrix x_train = standardize_apply(x_train_raw, std_params);
    const Matrix x_test = standardize_apply(x_test_raw, std_params);

    const std::size_t split = (features.cols() + 1) / 2;
    const VerticalDataset train = vertical_split(x_train, y_train, split);
    const VerticalDataset test = vertical_split(x_test, y_test, split);

    RunOptions opts;
    opts.seed = seed;
    opts.range = DynamicRange(0);  // standardized features

    const auto t0 = Clock::now();
    const ProtocolRun trained = run_s3plrt(train.x1, train.x2, train.y, opts);
    const double wall_train = ms_since(t0);

    RunOptions popts = opts;
    popts.session = 2;
    const auto t1 = Clock::now();
    const ProtocolRun predicted = run_s3plrp(test.x1, test.x2, trained.shares[0],
                                             trained.shares[1], trained.shares[2], popts);
    const double wall_predict = ms_since(t1);

    // Plaintext baseline over the same pipeline.
    const Matrix design_train = train.x1 + train.x2;
    const Matrix design_test = test.x1 + test.x2;
    const Matrix beta_plain = plain_least_squares(design_train, y_train);
    const Matrix y_hat_plain = mat_mul(design_test, beta_plain);
    const double r2_plain = r_squared(y_hat_plain, y_test);

    const MetricsReport metrics =
        evaluate(predicted.sum, y_test, trained.sum, beta_plain, r2_plain);
    const double pred_err =
        max_abs_diff(predicted.sum, y_hat_plain) / y_hat_plain.max_abs();

    const bool pass = trained.accepted && predicted.accepted && metrics.rrs <= 1e-4;
    json report{{"command", "regress"},
                {"source", source},
                {"label", label.empty() ? json() : json(label)},
                {"n_train", n_train},
                {"n_test", n_test},
                {"features", features.cols()},
                {"seed", seed},
                {"standardized_constant_columns", std_params.any_constant()},
                {"accepted", trained.accepted && predicted.accepted},
                {"metrics",
                 {{"mae", metrics.mae},
                  {"mse", metrics.mse},
                  {"rmse", metrics.rmse},
                  {"r2", metrics.r2},
                  {"lnre", metrics.lnre},
                  {"rrs", metrics.rrs},
                  {"mre", metrics.mre}}},
                {"plain", {{"r2", r2_plain}}},
                {"prediction_rel_error", pred_err},
                {"rounds", {{"train", trained.stats.rounds()}, {"predict", predicted.stats.rounds()}}},
                {"payload_bytes",
                 {{"train", trained.stats.payload_bytes()},
                  {"predict", predicted.stats.payload_bytes()}}},
                {"wall_ms", {{"train", wall_train}, {"predict", wall_predict}}},
                {"pass", pass}};
    emit(report, out_path);
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"EVA secure 3-party matrix computation toolkit"};
    app.require_subcommand(1);

    std::string protocol = "s2pm", transport = "inproc", out_path, csv_path, label;
    std::string n_list = "10,20,30,40,50", delta_list = "0,2,4,6,8,10", dims_csv;
    std::size_t n = 10, m = 10, trials = 100, rounds = 20;
    int delta = 4;
    std::uint64_t seed = 1;
    double test_frac = 0.2;
    bool force_singular = false;
    std::vector<std::string> binds;

    auto* demo = app.add_subcommand("demo", "one honest session with report");
    demo->add_option("--protocol", protocol, "s2pm|s3pm|s2pi|s2phm|s3phm");
    demo->add_option("--n", n, "square dimension");
    demo->add_option("--dims", dims_csv, "chained dims n,s,t,m (non-square)");
    demo->add_option("--delta", delta, "dynamic range exponent bound");
    demo->add_option("--seed", seed);
    demo->add_option("--rounds", rounds, "verification rounds");
    demo->add_option("--transport", transport, "inproc|tcp");
    demo->add_option("--bind", binds, "ROLE=HOST:PORT (tcp transport)");
    demo->add_flag("--singular", force_singular, "force a singular s2pi input");
    demo->add_option("--out", out_path, "write the JSON report here");

    auto* precision = app.add_subcommand("precision", "MRE sweep over (n, delta) cells");
    precision->add_option("--protocol", protocol);
    precision->add_option("--n-list", n_list);
    precision->add_option("--delta-list", delta_list);
    precision->add_option("--trials", trials);
    precision->add_option("--seed", seed);
    precision->add_option("--rounds", rounds);
    precision->add_option("--out", out_path);

    auto* tamper = app.add_subcommand("tamper", "fault-injection detection rates");
    tamper->add_option("--protocol", protocol);
    tamper->add_option("--n", n);
    tamper->add_option("--delta", delta);
    tamper->add_option("--trials", trials);
    tamper->add_option("--seed", seed);
    tamper->add_option("--out", out_path);

    auto* audit = app.add_subcommand("comm-audit", "ledger vs closed-form byte/round table");
    audit->add_option("--n-list", n_list);
    audit->add_option("--seed", seed);
    audit->add_option("--out", out_path);

    auto* regress = app.add_subcommand("regress", "secure 3-party linear regression");
    regress->add_option("--csv", csv_path, "numeric CSV with header row");
    regress->add_option("--label", label, "label column name or index");
    regress->add_option("--n", n, "synthetic sample count")->default_val(400);
    regress->add_option("--m", m, "synthetic feature count")->default_val(10);
    regress->add_option("--test-frac", test_frac);
    regress->add_option("--seed", seed);
    regress->add_option("--out", out_path);

    CLI11_PARSE(app, argc, argv);

    try {
        if (demo->parsed()) {
            return cmd_demo(protocol, n, dims_csv, delta, seed, rounds, transport, binds,
                            force_singular, out_path);
        }
        if (precision->parsed() || tamper->parsed()) {
            if (trials < 1) throw DegenerateInputError("--trials must be at least 1");
        }
        if (precision->parsed()) {
            return cmd_precision(protocol, n_list, delta_list, trials, seed, rounds, out_path);
        }
        if (tamper->parsed()) {
            return cmd_tamper(protocol, n, delta, trials, seed, out_path);
        }
        if (audit->parsed()) {
            return cmd_comm_audit(n_list, seed, out_path);
        }
        if (regress->parsed()) {
            if (!csv_path.empty() && label.empty()) {
                throw DegenerateInputError("--csv requires --label NAME_OR_INDEX");
            }
            return cmd_regress(csv_path, label, n, m, test_frac, seed, out_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
