#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "seqmimo/config_io.hpp"
#include "seqmimo/experiment.hpp"

using namespace seqmimo;

namespace {

// small sweep that runs in milliseconds
ExperimentSpec tiny_spec() {
    ExperimentSpec spec;
    spec.m_values = {8};
    spec.k_values = {2};
    spec.l_values = {2, 4, 8};
    spec.memory_models = {{MemoryScheme::FixedPerAp, 1024}, {MemoryScheme::Infinite, 0}};
    spec.options = {CompressionOption::VectorWise, CompressionOption::ElementWise};
    spec.n_subcarriers = 16;
    spec.num_trials = 8;
    spec.base_seed = 314;
    return spec;
}

struct CsvRow {
    std::string sweep_param, option, memory_scheme, topology;
    double sweep_value, mean_se, std_se;
    long long capacity_bits, k, m, trials;
    unsigned long long seed;
};

std::vector<CsvRow> parse_csv(const std::string& text) {
    std::vector<CsvRow> rows;
    std::stringstream ss(text);
    std::string line;
    std::getline(ss, line);  // header
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string f[12];
        for (int i = 0; i < 12; ++i) std::getline(ls, f[i], ',');
        CsvRow r;
        r.sweep_param = f[0];
        r.sweep_value = std::stod(f[1]);
        r.option = f[2];
        r.memory_scheme = f[3];
        r.capacity_bits = std::stoll(f[4]);
        r.topology = f[5];
        r.k = std::stoll(f[6]);
        r.m = std::stoll(f[7]);
        r.mean_se = std::stod(f[8]);
        r.std_se = std::stod(f[9]);
        r.trials = std::stoll(f[10]);
        r.seed = std::stoull(f[11]);
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

TEST_CASE("identical spec gives an identical report") {
    const ExperimentSpec spec = tiny_spec();
    const SEReport a = run_experiment_serial(spec);
    const SEReport b = run_experiment_serial(spec);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].per_trial == b.rows[i].per_trial);
        CHECK(a.rows[i].mean_se == b.rows[i].mean_se);
    }
}

TEST_CASE("openmp runner reproduces the serial reference bit for bit") {
    const ExperimentSpec spec = tiny_spec();
    const SEReport serial = run_experiment_serial(spec);
    for (int jobs : {2, 4}) {
        const SEReport parallel = run_experiment_parallel(spec, jobs);
        REQUIRE(parallel.rows.size() == serial.rows.size());
        for (std::size_t i = 0; i < serial.rows.size(); ++i) {
            CHECK(parallel.rows[i].per_trial == serial.rows[i].per_trial);
            CHECK(parallel.rows[i].mean_se == serial.rows[i].mean_se);
            CHECK(parallel.rows[i].std_se == serial.rows[i].std_se);
        }
    }
}

TEST_CASE("single trial with a fixed seed is stable") {
    ExperimentSpec spec = tiny_spec();
    spec.num_trials = 1;
    const SEReport a = run_experiment(spec);
    const SEReport b = run_experiment(spec);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].mean_se == b.rows[i].mean_se);
        CHECK(a.rows[i].std_se == 0.0);
    }
}

TEST_CASE("infeasible sweep points are flagged, the run continues") {
    ExperimentSpec spec = tiny_spec();
    spec.l_values = {2, 3, 4};  // L=3 does not divide M=8
    const SEReport report = run_experiment(spec);
    int flagged = 0, ok = 0;
    for (const auto& row : report.rows) {
        if (!row.feasible) {
            ++flagged;
            CHECK(row.trials == 0);
            CHECK(std::isnan(row.mean_se));
        } else {
            ++ok;
            CHECK(row.trials == spec.num_trials);
        }
    }
    CHECK(flagged > 0);
    CHECK(ok > 0);

    // tree with non-power-of-two L is likewise flagged
    ExperimentSpec tree = tiny_spec();
    tree.m_values = {12};
    tree.l_values = {6};
    tree.topologies = {TopologyKind::BinaryFanInTree};
    const SEReport tr = run_experiment(tree);
    for (const auto& row : tr.rows) CHECK(!row.feasible);
}

TEST_CASE("csv: empty report is header-only, fields round-trip exactly") {
    SEReport empty;
    std::ostringstream out;
    emit_report(empty, out, ReportFormat::Csv);
    CHECK(out.str() ==
          "sweep_param,sweep_value,option,memory_scheme,capacity_bits,topology,K,M,"
          "mean_se,std_se,trials,seed\n");

    const SEReport report = run_experiment(tiny_spec());
    std::ostringstream full;
    emit_report(report, full, ReportFormat::Csv);
    const std::vector<CsvRow> parsed = parse_csv(full.str());
    REQUIRE(parsed.size() == report.rows.size());
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        if (report.rows[i].feasible) {
            CHECK(parsed[i].mean_se == report.rows[i].mean_se);  // full precision
            CHECK(parsed[i].std_se == report.rows[i].std_se);
        }
        CHECK(parsed[i].option == report.rows[i].option);
        CHECK(parsed[i].capacity_bits == report.rows[i].capacity_bits);
        CHECK(parsed[i].trials == report.rows[i].trials);
    }
}

TEST_CASE("plotdata format groups rows per curve") {
    const SEReport report = run_experiment(tiny_spec());
    std::ostringstream out;
    emit_report(report, out, ReportFormat::PlotData);
    const std::string text = out.str();
    CHECK(text.find("# preset = Custom") != std::string::npos);
    int curves = 0;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.rfind("# curve:", 0) == 0) ++curves;
    }
    // 2 memory models x (2 options / 1 for inf) = 3 curves
    CHECK(curves == 3);
}

TEST_CASE("figure presets: row counts and errors") {
    const ExperimentSpec fig3 = figure_preset("Fig3");
    // 2 K values x 5 memory models x 7 L values, one option each
    const SEReport report = [&] {
        ExperimentSpec s = fig3;
        s.num_trials = 1;
        s.l_values = {2};  // cut runtime, keep structure
        return run_experiment(s);
    }();
    CHECK(report.rows.size() == 2 * 5 * 1);

    CHECK(fig3.l_values == std::vector<std::int64_t>{2, 4, 8, 16, 32, 64, 128});
    CHECK(fig3.k_values == std::vector<std::int64_t>{4, 64});
    CHECK(fig3.memory_models.size() == 5);
    CHECK(fig3.options == std::vector<CompressionOption>{CompressionOption::VectorWise});

    CHECK_THROWS_AS(figure_preset("Fig99"), std::invalid_argument);

    // Custom echoes the defaults untouched
    const ExperimentSpec custom = figure_preset("Custom");
    const ExperimentSpec defaults;
    CHECK(custom.l_values == defaults.l_values);
    CHECK(custom.num_trials == defaults.num_trials);

    // desk scaling shrinks antennas, subcarriers, capacities, trials
    const ExperimentSpec desk = figure_preset("Fig3", true);
    CHECK(desk.m_values == std::vector<std::int64_t>{16});
    CHECK(desk.n_subcarriers == 64);
    CHECK(desk.num_trials == 100);
    CHECK(desk.l_values == std::vector<std::int64_t>{2, 4, 8, 16});
    CHECK(desk.memory_models[1].capacity_bits == parse_capacity_bits("256KB") / 64);

    // Fig8 keeps the pilot dimension
    const ExperimentSpec fig8 = figure_preset("Fig8");
    CHECK(fig8.tau_p_values == std::vector<int>{1, 2});
}

TEST_CASE("pilot sweep rows carry the pilot length in the option label") {
    ExperimentSpec spec = tiny_spec();
    spec.tau_p_values = {1, 2};
    spec.l_values = {2};
    spec.memory_models = {{MemoryScheme::Infinite, 0}};
    const SEReport report = run_experiment(spec);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].option == "none@tp1");
    CHECK(report.rows[1].option == "none@tp2");
    CHECK(report.rows[0].mean_se != report.rows[1].mean_se);
}

TEST_CASE("statistical stability: doubling trials moves means within 3 standard errors") {
    ExperimentSpec spec = tiny_spec();
    spec.num_trials = 200;
    const SEReport base = run_experiment(spec);
    spec.num_trials = 400;
    const SEReport doubled = run_experiment(spec);
    REQUIRE(base.rows.size() == doubled.rows.size());
    for (std::size_t i = 0; i < base.rows.size(); ++i) {
        const double se = base.rows[i].std_se / std::sqrt(200.0);
        CHECK(std::abs(doubled.rows[i].mean_se - base.rows[i].mean_se) < 3.0 * se);
    }
}

TEST_CASE("cross-option ordering holds in the mean, PCA equals VC per trial") {
    ExperimentSpec spec;
    spec.m_values = {16};
    spec.k_values = {2};
    spec.l_values = {2, 4};
    spec.n_subcarriers = 64;
    spec.memory_models = {{MemoryScheme::FixedPerAp, 2048}};  // tight budget
    spec.options = {CompressionOption::VectorWise, CompressionOption::ElementWise,
                    CompressionOption::ElementWiseEqualBits,
                    CompressionOption::PcaElementWise};
    spec.num_trials = 250;
    spec.base_seed = 99;
    const SEReport report = run_experiment(spec);
    REQUIRE(report.rows.size() == 2 * 4);
    for (int point = 0; point < 2; ++point) {
        const ReportRow& vc = report.rows[point * 4 + 0];
        const ReportRow& ec = report.rows[point * 4 + 1];
        const ReportRow& eq = report.rows[point * 4 + 2];
        const ReportRow& pca = report.rows[point * 4 + 3];
        CHECK(vc.mean_se >= ec.mean_se - 1e-9);
        CHECK(ec.mean_se >= eq.mean_se - 1e-9);
        for (std::int64_t t = 0; t < spec.num_trials; ++t) {
            CHECK(pca.per_trial[t] == doctest::Approx(vc.per_trial[t]).epsilon(1e-9));
        }
    }
}

TEST_CASE("imperfect CSI lowers the spectral efficiency") {
    ExperimentSpec perfect = tiny_spec();
    perfect.l_values = {4};
    perfect.memory_models = {{MemoryScheme::Infinite, 0}};
    perfect.num_trials = 150;
    ExperimentSpec imperfect = perfect;
    imperfect.tau_p_values = {1};  // both users share one pilot
    const SEReport a = run_experiment(perfect);
    const SEReport b = run_experiment(imperfect);
    CHECK(b.rows[0].mean_se < a.rows[0].mean_se);
}

TEST_CASE("config file and overrides reproduce a run") {
    const ExperimentSpec spec = [] {
        ExperimentSpec s = tiny_spec();
        s.preset_name = "Custom";
        return s;
    }();
    const SEReport before = run_experiment(spec);

    // write the effective config, load it into a fresh spec, run again
    const std::string text = spec_to_config_string(spec);
    const std::string path = "roundtrip_test.conf";
    {
        std::ofstream out(path);
        out << text;
    }
    ExperimentSpec loaded;
    apply_config_file(loaded, path);
    std::remove(path.c_str());
    const SEReport after = run_experiment(loaded);

    REQUIRE(before.rows.size() == after.rows.size());
    for (std::size_t i = 0; i < before.rows.size(); ++i) {
        CHECK(before.rows[i].mean_se == after.rows[i].mean_se);
        CHECK(before.rows[i].std_se == after.rows[i].std_se);
    }
}

TEST_CASE("overrides win over config files") {
    ExperimentSpec spec;
    const std::string path = "override_test.conf";
    {
        std::ofstream out(path);
        out << "# comment line\n";
        out << "trials = 7\n";
        out << "K = 3\n";
    }
    apply_config_file(spec, path);
    std::remove(path.c_str());
    CHECK(spec.num_trials == 7);
    CHECK(spec.k_values == std::vector<std::int64_t>{3});
    apply_override(spec, "trials=9");
    CHECK(spec.num_trials == 9);
}

TEST_CASE("config errors carry the offending key") {
    ExperimentSpec spec;
    try {
        apply_override(spec, "no_such_key=1");
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("no_such_key") != std::string::npos);
    }
    CHECK_THROWS_AS(apply_override(spec, "trials"), config_error);
    CHECK_THROWS_AS(apply_override(spec, "K=abc"), config_error);
    CHECK_THROWS_AS(apply_override(spec, "memory=ft_ea"), config_error);
    CHECK_THROWS_AS(apply_config_file(spec, "does_not_exist.conf"), config_error);
}

TEST_CASE("power and memory model parsing") {
    CHECK(parse_power_watts("0.01") == doctest::Approx(0.01));
    CHECK(parse_power_watts("10mW") == doctest::Approx(0.01));
    CHECK(parse_power_watts("-85dBm") == doctest::Approx(dbm_to_watt(-85.0)));
    CHECK_THROWS_AS(parse_power_watts("5parsec"), config_error);

    const MemoryModel m = parse_memory_model("ft_ea:8MB");
    CHECK(m.scheme == MemoryScheme::FixedTotalEqual);
    CHECK(m.capacity_bits == 67108864);
    CHECK(parse_memory_model("inf").scheme == MemoryScheme::Infinite);
    CHECK(format_memory_model(m) == "ft_ea:8MB");
    CHECK_THROWS_AS(parse_memory_model("fap"), config_error);
}
