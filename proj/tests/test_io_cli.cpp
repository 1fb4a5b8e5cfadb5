#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "masscone/cli.hpp"
#include "masscone/errors.hpp"
#include "masscone/io.hpp"
#include "test_support.hpp"

using namespace masscone;

TEST_SUITE_BEGIN("io_cli");

namespace {

using njson = nlohmann::json;

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& contents)
        : path("masscone_test_" + name) {
        std::ofstream out(path, std::ios::binary);
        out << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

} // namespace

TEST_CASE("measure json round trip") {
    const auto mu = mct::m1({{0.0, 0.25}, {1.0, 0.75}});
    const auto back = io::parse_measure_json(io::measure_to_json(mu));
    CHECK(approx_equal(mu, back, 1e-12));

    const auto zero = io::parse_measure_json(R"({"dim": 2, "points": [], "weights": []})");
    CHECK(zero.is_zero());
    CHECK(zero.dim() == 2);
}

TEST_CASE("measure json rejects malformed input") {
    CHECK_THROWS_AS(io::parse_measure_json("{"), ConfigError);
    CHECK_THROWS_AS(io::parse_measure_json(R"({"points": [[0]], "weights": [1]})"), ConfigError);
    CHECK_THROWS_AS(
        io::parse_measure_json(R"({"dim": 2, "points": [[0.0]], "weights": [1.0]})"),
        ConfigError);
    CHECK_THROWS_AS(
        io::parse_measure_json(R"({"dim": 1, "points": [[0.0]], "weights": [-1.0]})"),
        ConfigError);
    CHECK_THROWS_AS(
        io::parse_measure_json(R"({"dim": 1, "points": [[0.0]], "weights": [1.0, 2.0]})"),
        ConfigError);
}

TEST_CASE("measure csv round trip and validation") {
    const auto mu = io::parse_measure_csv("# comment\n0.0, 0.25\n1.0, 0.75\n");
    CHECK(mu.dim() == 1);
    CHECK(total_mass(mu) == doctest::Approx(1.0));
    const auto back = io::parse_measure_csv(io::measure_to_csv(mu));
    CHECK(approx_equal(mu, back, 1e-12));

    CHECK_THROWS_AS(io::parse_measure_csv(""), ConfigError);
    CHECK_THROWS_AS(io::parse_measure_csv("1.0\n"), ConfigError);
    CHECK_THROWS_AS(io::parse_measure_csv("0.0, 1.0\n0.0, 1.0, 1.0\n"), ConfigError);
    CHECK_THROWS_AS(io::parse_measure_csv("0.0, abc\n"), ConfigError);
}

TEST_CASE("toml subset translates to json") {
    const std::string toml = R"(
# metric spec
family = "product_q"   # family name
lambda = 1.5
enabled = true
label = "demo"
values = [1.0, 2.5, -3.0]
names = ["a", "b"]

[f]
kind = "ratio"
)";
    const njson j = njson::parse(io::toml_to_json(toml));
    CHECK(j.at("family") == "product_q");
    CHECK(j.at("lambda") == 1.5);
    CHECK(j.at("enabled") == true);
    CHECK(j.at("label") == "demo");
    CHECK(j.at("values") == njson({1.0, 2.5, -3.0}));
    CHECK(j.at("names") == njson({"a", "b"}));
    CHECK(j.at("f").at("kind") == "ratio");

    CHECK_THROWS_AS(io::toml_to_json("key value\n"), ConfigError);
    CHECK_THROWS_AS(io::toml_to_json("[section\n"), ConfigError);
    CHECK_THROWS_AS(io::toml_to_json("k = [1, 2\n"), ConfigError);
    CHECK_THROWS_AS(io::toml_to_json("k = \"open\n"), ConfigError);
}

TEST_CASE("metric specs parse from toml and json") {
    const auto toml_spec = io::parse_metric_spec(R"(
family = "product_q"
lambda = 2.0
q = "inf"
p = 1.0
)", true);
    CHECK(toml_spec.family == MetricFamily::product_q);
    CHECK(toml_spec.lambda == 2.0);
    CHECK(std::isinf(toml_spec.q));

    // Tables extend constantly outside the sampled range, so an admissible
    // table must bring its first sample down to (~0, ~0).
    const auto json_spec = io::parse_metric_spec(R"(
{"family": "bounded_space_with_zero",
 "p": 1.0,
 "domain_lo": [0.0], "domain_hi": [1.0],
 "f": {"kind": "table", "masses": [1e-9, 1.0, 10.0], "values": [1e-9, 0.5, 0.9]}}
)", false);
    CHECK(json_spec.family == MetricFamily::bounded_space_with_zero);
    const ExtendedMetric metric(json_spec);
    CHECK(metric.spec().diam_bound == doctest::Approx(1.0)); // derived from the domain

    CHECK_THROWS_AS(io::parse_metric_spec(R"({"family": "nope"})", false), ConfigError);
    CHECK_THROWS_AS(io::parse_metric_spec(R"({"family": "custom"})", false), ConfigError);
    CHECK_THROWS_AS(io::parse_metric_spec(R"({"family": "product_q", "q": "huge"})", false),
                    ConfigError);
}

TEST_CASE("cli dist writes the documented report") {
    TempFile metric("m.toml", "family = \"product_q\"\nlambda = 1.0\nq = 2.0\np = 1.0\n");
    TempFile a("a.json", R"({"dim": 2, "points": [[0.0, 0.0]], "weights": [1.0]})");
    TempFile b("b.json", R"({"dim": 2, "points": [[3.0, 4.0]], "weights": [2.0]})");
    TempFile out("dist_report.json", "");

    cli::RunConfig cfg;
    cfg.command = cli::Command::dist;
    cfg.metric_path = metric.path;
    cfg.measure_a = a.path;
    cfg.measure_b = b.path;
    cfg.out_path = out.path;
    cfg.no_timestamp = true;
    CHECK(cli::run(cfg) == 0);

    const njson report = njson::parse(slurp(out.path));
    CHECK(report.at("results").at("distance").get<double>() ==
          doctest::Approx(std::sqrt(26.0)).epsilon(1e-12));
    CHECK(report.at("metric").at("family") == "product_q");
    CHECK(report.at("seed") == kDefaultSeed);
    CHECK(!report.contains("timestamp"));
}

TEST_CASE("cli axioms on the product metric exits clean") {
    TempFile metric("ax.toml", "family = \"product_q\"\nlambda = 1.0\nq = 2.0\np = 1.0\n");
    TempFile out("ax_report.json", "");
    cli::RunConfig cfg;
    cfg.command = cli::Command::axioms;
    cfg.metric_path = metric.path;
    cfg.trials = 800;
    cfg.dim = 2;
    cfg.out_path = out.path;
    cfg.no_timestamp = true;
    CHECK(cli::run(cfg) == 0);
    const njson report = njson::parse(slurp(out.path));
    CHECK(report.at("results").at("failures") == 0);
    CHECK(report.at("results").at("reports").size() == 4);
}

TEST_CASE("cli obstruct finds the linear-f witness and exits 1") {
    TempFile config("ob.toml", R"(
test = "scaling"
m0 = 1.5
r = 0.6
C = 1.0

[f]
kind = "identity"

[sigma]
kind = "geometric_ray"
dim = 1
r_max = 64.0
)");
    TempFile out("ob_report.json", "");
    cli::RunConfig cfg;
    cfg.command = cli::Command::obstruct;
    cfg.config_path = config.path;
    cfg.out_path = out.path;
    cfg.no_timestamp = true;
    CHECK(cli::run(cfg) == 1);
    const njson report = njson::parse(slurp(out.path));
    REQUIRE(report.at("results").at("witnesses").size() == 1);
    const auto& w = report.at("results").at("witnesses").at(0);
    CHECK(w.at("margin").get<double>() >= 0.5);
    CHECK(w.at("measures").size() == 4);
}

TEST_CASE("cli exit code 2 on input errors") {
    cli::RunConfig cfg;
    cfg.command = cli::Command::dist;
    cfg.metric_path = "does_not_exist.toml";
    cfg.measure_a = "nope.json";
    cfg.measure_b = "nope.json";
    CHECK(cli::run(cfg) == 2);

    TempFile bad("bad.toml", "family =\n");
    cli::RunConfig cfg2;
    cfg2.command = cli::Command::axioms;
    cfg2.metric_path = bad.path;
    CHECK(cli::run(cfg2) == 2);

    // csv format requires an output path to place the adjacent file
    TempFile metric("fmt.toml", "family = \"product_q\"\n");
    TempFile a("fa.json", R"({"dim": 1, "points": [[0.0]], "weights": [1.0]})");
    cli::RunConfig cfg3;
    cfg3.command = cli::Command::dist;
    cfg3.metric_path = metric.path;
    cfg3.measure_a = a.path;
    cfg3.measure_b = a.path;
    cfg3.format = "csv";
    CHECK(cli::run(cfg3) == 2);
}

TEST_CASE("cli reports are byte-identical for a fixed seed") {
    TempFile metric("det.toml", "family = \"product_q\"\nlambda = 1.0\nq = 2.0\np = 1.0\n");
    TempFile out1("det1.json", "");
    TempFile out2("det2.json", "");
    cli::RunConfig cfg;
    cfg.command = cli::Command::axioms;
    cfg.metric_path = metric.path;
    cfg.trials = 500;
    cfg.seed = 2024;
    cfg.no_timestamp = true;
    cfg.out_path = out1.path;
    CHECK(cli::run(cfg) == 0);
    cfg.out_path = out2.path;
    cfg.threads = 2; // scheduling must not affect the bytes
    CHECK(cli::run(cfg) == 0);
    CHECK(slurp(out1.path) == slurp(out2.path));
}

TEST_CASE("cli csv emission") {
    TempFile metric("csv.toml", "family = \"product_q\"\n");
    TempFile a("ca.json", R"({"dim": 1, "points": [[0.0]], "weights": [1.0]})");
    TempFile b("cb.json", R"({"dim": 1, "points": [[2.0]], "weights": [1.0]})");
    TempFile out("csv_report.json", "");
    TempFile csv("csv_report.csv", "");
    cli::RunConfig cfg;
    cfg.command = cli::Command::dist;
    cfg.metric_path = metric.path;
    cfg.measure_a = a.path;
    cfg.measure_b = b.path;
    cfg.out_path = out.path;
    cfg.format = "csv";
    cfg.no_timestamp = true;
    CHECK(cli::run(cfg) == 0);
    const std::string text = slurp(csv.path);
    CHECK(text.find("field,value") != std::string::npos);
    CHECK(text.find("distance,2") != std::string::npos);
}

TEST_CASE("cli warped computes the configured distance") {
    TempFile config("warp.toml", R"(
p = 1.0

[g]
kind = "one_plus_wp_to_origin"

[grid]
mass_min = 0.5
mass_max = 2.5
mass_steps = 13
box_lo = [-10.0]
box_hi = [10.0]
spatial_steps = 81
stencil_radius = 1

[src]
mass = 1.0
position = [-2.5]

[dst]
mass = 1.0
position = [2.5]
)");
    TempFile out("warp_report.json", "");
    cli::RunConfig cfg;
    cfg.command = cli::Command::warped;
    cfg.config_path = config.path;
    cfg.out_path = out.path;
    cfg.no_timestamp = true;
    CHECK(cli::run(cfg) == 0);
    const njson report = njson::parse(slurp(out.path));
    CHECK(report.at("results").at("value").get<double>() == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("cli probe flags inconsistent fibers via exit status") {
    TempFile metric("probe.toml", "family = \"product_q\"\nlambda = 3.0\n");
    TempFile out("probe_report.json", "");
    cli::RunConfig cfg;
    cfg.command = cli::Command::probe;
    cfg.metric_path = metric.path;
    cfg.probe_mass = 0.7;
    cfg.out_path = out.path;
    cfg.no_timestamp = true;
    CHECK(cli::run(cfg) == 0);
    const njson report = njson::parse(slurp(out.path));
    CHECK(report.at("results").at("estimated_scale").get<double>() ==
          doctest::Approx(3.0).epsilon(1e-9));
    CHECK(report.at("results").at("consistent") == true);
}
