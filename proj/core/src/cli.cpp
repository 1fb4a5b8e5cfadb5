#include "masscone/cli.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json_support.hpp"
#include "masscone/axiom_engine.hpp"
#include "masscone/errors.hpp"
#include "masscone/io.hpp"
#include "masscone/obstruction_lab.hpp"

namespace masscone::cli {

namespace {

using io::detail::njson;

std::string command_name(Command c) {
    switch (c) {
    case Command::dist: return "dist";
    case Command::axioms: return "axioms";
    case Command::obstruct: return "obstruct";
    case Command::warped: return "warped";
    case Command::probe: return "probe";
    }
    return "unknown";
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write output file: " + path);
    out << text << "\n";
}

std::string csv_path_for(const std::string& out_path) {
    const auto dot = out_path.rfind('.');
    if (dot == std::string::npos) return out_path + ".csv";
    return out_path.substr(0, dot) + ".csv";
}

/// Rows of (violated, trial, lhs, rhs, margin) for witness-bearing commands,
/// single field,value rows otherwise.
std::string report_to_csv(const njson& report) {
    std::ostringstream out;
    out.precision(17);
    const auto& results = report.at("results");
    if (results.contains("reports") || results.contains("witnesses")) {
        out << "violated,trial,lhs,rhs,margin\n";
        auto emit = [&](const njson& w) {
            out << w.at("violated").get<std::string>() << "," << w.at("trial").get<std::uint64_t>()
                << "," << w.at("lhs").get<double>() << "," << w.at("rhs").get<double>() << ","
                << w.at("margin").get<double>() << "\n";
        };
        if (results.contains("reports"))
            for (const auto& rep : results.at("reports"))
                for (const auto& w : rep.at("witnesses")) emit(w);
        if (results.contains("witnesses"))
            for (const auto& w : results.at("witnesses")) emit(w);
    } else {
        out << "field,value\n";
        for (const auto& [key, value] : results.items()) {
            if (value.is_number())
                out << key << "," << value.get<double>() << "\n";
            else if (value.is_boolean())
                out << key << "," << (value.get<bool>() ? 1 : 0) << "\n";
        }
    }
    return out.str();
}

void emit_report(const RunConfig& config, njson report) {
    if (!config.no_timestamp) report["timestamp"] = utc_timestamp();
    if (config.format != "json" && config.format != "csv")
        throw ConfigError("unknown report format '" + config.format + "'");
    if (config.format == "csv" && config.out_path.empty())
        throw ConfigError("csv format needs --out (the CSV is written next to the JSON report)");
    write_text(config.out_path, report.dump(2));
    if (config.format == "csv") write_text(csv_path_for(config.out_path), report_to_csv(report));
}

njson report_envelope(const RunConfig& config) {
    njson report;
    report["command"] = command_name(config.command);
    report["seed"] = config.seed;
    report["tolerance"] = config.tolerance;
    return report;
}

std::function<double(double, const DiscreteMeasure&)> zero_rule_from_json(const njson& j) {
    const std::string kind = j.is_object() ? j.value("kind", std::string("mass")) : "mass";
    if (kind == "mass") return [](double m, const DiscreteMeasure&) { return m; };
    if (kind == "scaled_mass") {
        const double scale = j.value("scale", 1.0);
        return [scale](double m, const DiscreteMeasure&) { return scale * m; };
    }
    if (kind == "constant") {
        const double value = j.value("value", 1.0);
        return [value](double, const DiscreteMeasure&) { return value; };
    }
    throw ConfigError("unknown zero rule '" + kind + "'");
}

DiscreteMeasure measure_from_path_or_inline(const njson& j, const std::string& field) {
    if (!j.contains(field)) throw ConfigError("obstruct config: missing '" + field + "'");
    const auto& v = j.at(field);
    if (v.is_string()) return io::load_measure(v.get<std::string>());
    return io::detail::measure_from_json_obj(v, field);
}

int run_dist(const RunConfig& config) {
    if (config.metric_path.empty() || config.measure_a.empty() || config.measure_b.empty())
        throw ConfigError("dist needs --metric, --a and --b");
    const ExtendedMetric metric = io::load_metric(config.metric_path);
    const DiscreteMeasure a = io::load_measure(config.measure_a);
    const DiscreteMeasure b = io::load_measure(config.measure_b);
    const double value = metric(a, b);

    njson report = report_envelope(config);
    report["metric"] = io::detail::metric_spec_to_json_obj(metric.spec());
    report["results"] = {{"distance", value},
                         {"mass_a", total_mass(a)},
                         {"mass_b", total_mass(b)}};
    emit_report(config, std::move(report));
    return 0;
}

int run_axioms(const RunConfig& config) {
    if (config.metric_path.empty()) throw ConfigError("axioms needs --metric");
    const ExtendedMetric metric = io::load_metric(config.metric_path);

    MeasureSampler sampler;
    if (metric.spec().family == MetricFamily::bounded_space_with_zero &&
        metric.spec().domain.kind == Domain::Kind::box) {
        sampler.dim = metric.spec().domain.dim();
        sampler.box = metric.spec().domain.box;
        sampler.zero_probability = 0.05;
    } else {
        sampler.dim = config.dim;
        sampler.box.lo.assign(static_cast<std::size_t>(config.dim), 0.0);
        sampler.box.hi.assign(static_cast<std::size_t>(config.dim), 1.0);
    }

    AxiomSuiteConfig suite;
    suite.trials = config.trials;
    suite.tolerance = config.tolerance;
    suite.seed = config.seed;
    suite.threads = config.threads;
    const auto reports = run_axiom_suite(metric, sampler, suite);

    std::size_t failures = 0;
    njson report = report_envelope(config);
    report["metric"] = io::detail::metric_spec_to_json_obj(metric.spec());
    report["trials"] = config.trials;
    njson out_reports = njson::array();
    for (const auto& rep : reports) {
        failures += rep.witnesses.size();
        out_reports.push_back(io::detail::axiom_report_to_json_obj(rep));
    }
    report["results"] = {{"reports", std::move(out_reports)}, {"failures", failures}};
    emit_report(config, std::move(report));
    return failures == 0 ? 0 : 1;
}

int run_probe(const RunConfig& config) {
    if (config.metric_path.empty()) throw ConfigError("probe needs --metric");
    const ExtendedMetric metric = io::load_metric(config.metric_path);
    Rng rng(config.seed);
    const auto pairs = [&] {
        const auto& spec = metric.spec();
        if (spec.family == MetricFamily::warped_dirac_cone)
            return dirac_probe_pairs(spec.grid, config.probe_pairs, rng);
        if (spec.family == MetricFamily::bounded_space_with_zero &&
            spec.domain.kind == Domain::Kind::box)
            return random_probe_pairs(spec.domain.box, config.probe_pairs, rng);
        return random_probe_pairs(config.dim, config.probe_pairs, rng);
    }();
    const auto probe = fiber_scaling_probe(metric, config.probe_mass, pairs);

    njson report = report_envelope(config);
    report["metric"] = io::detail::metric_spec_to_json_obj(metric.spec());
    report["results"] = {{"mass", config.probe_mass},
                         {"estimated_scale", probe.estimated_scale},
                         {"consistent", probe.consistent},
                         {"max_spread", probe.max_spread},
                         {"ratios", probe.ratios}};
    emit_report(config, std::move(report));
    return probe.consistent ? 0 : 1;
}

int run_obstruct(const RunConfig& config) {
    if (config.config_path.empty()) throw ConfigError("obstruct needs --config");
    const njson j = io::detail::load_config_json(config.config_path);
    const std::string test = j.value("test", std::string("scaling"));

    njson report = report_envelope(config);
    report["config"] = j;
    njson results;
    bool found = false;

    if (test == "scaling") {
        if (!j.contains("f")) throw ConfigError("scaling obstruction config: missing 'f'");
        const ScalingFunction f = io::detail::scaling_from_json_obj(j.at("f"));
        ObstructionConfig cfg;
        cfg.sigma = io::detail::sigma_from_json_obj(j.value("sigma", njson::object()));
        cfg.m0 = j.value("m0", 1.0);
        cfg.r = j.value("r", 0.5);
        cfg.C = j.value("C", 1.0);
        cfg.p = j.value("p", 1.0);
        cfg.probe_seed = config.seed;
        if (j.contains("candidate"))
            cfg.candidate = ExtendedMetric(io::detail::metric_spec_from_json_obj(j.at("candidate")));
        const auto result = find_scaling_violation(cfg, f);
        results["sampled_oscillation"] = result.sampled_oscillation;
        results["max_separation_examined"] = result.max_separation_examined;
        results["pairs_examined"] = result.pairs_examined;
        results["witnesses"] = njson::array();
        if (result.witness) {
            results["witnesses"].push_back(io::detail::witness_to_json_obj(*result.witness));
            found = true;
        }
    } else if (test == "zero_extension") {
        ExtensionCandidate cand;
        cand.lambda0 = j.value("lambda0", 1.0);
        cand.m0 = j.value("m0", 1.0);
        if (j.contains("Lambda")) cand.claimed_sup = j.at("Lambda").get<double>();
        if (j.contains("zero_rule")) cand.zero_distance = zero_rule_from_json(j.at("zero_rule"));
        const auto sigma = io::detail::sigma_from_json_obj(j.value("sigma", njson::object()));
        const auto result = zero_extension_diameter_test(cand, sigma);
        results["sampled_diameter"] = result.sampled_diameter;
        results["Lambda"] = result.Lambda;
        results["threshold"] = result.threshold;
        results["witnesses"] = njson::array();
        if (result.witness) {
            results["witnesses"].push_back(io::detail::witness_to_json_obj(*result.witness));
            found = true;
        }
    } else if (test == "collapse") {
        ExtensionCandidate cand;
        cand.lambda0 = j.value("lambda0", 1.0);
        cand.zero_distance = zero_rule_from_json(j.value("zero_rule", njson::object()));
        const DiscreteMeasure mu1 = measure_from_path_or_inline(j, "mu1");
        const DiscreteMeasure mu2 = measure_from_path_or_inline(j, "mu2");
        if (!j.contains("masses")) throw ConfigError("collapse config: missing 'masses'");
        const auto masses = j.at("masses").get<std::vector<double>>();
        const auto result =
            mass_continuity_collapse_test(cand, mu1, mu2, masses, j.value("p", 1.0));
        results["profile_distance"] = result.profile_distance;
        results["witnesses"] = njson::array();
        if (result.witness) {
            results["witnesses"].push_back(io::detail::witness_to_json_obj(*result.witness));
            results["index"] = *result.index;
            found = true;
        }
    } else {
        throw ConfigError("unknown obstruction test '" + test + "'");
    }

    report["results"] = std::move(results);
    emit_report(config, std::move(report));
    return found ? 1 : 0;
}

int run_warped(const RunConfig& config) {
    if (config.config_path.empty()) throw ConfigError("warped needs --config");
    const njson j = io::detail::load_config_json(config.config_path);
    if (!j.contains("grid")) throw ConfigError("warped config: missing 'grid'");
    const double p = j.value("p", 1.0);
    const GridSpec grid = io::detail::grid_from_json_obj(j.at("grid"));
    const WarpingFunction g = j.contains("g")
                                  ? io::detail::warping_from_json_obj(j.at("g"), p)
                                  : WarpingFunction{WarpKind::constant, 1.0, p, nullptr};

    auto endpoint = [&](const std::string& field) {
        if (!j.contains(field)) throw ConfigError("warped config: missing '" + field + "'");
        const auto& e = j.at(field);
        DiracConePoint pt;
        pt.mass = e.value("mass", 1.0);
        if (!e.contains("position")) throw ConfigError(field + ": missing 'position'");
        pt.position = e.at("position").get<Point>();
        return pt;
    };
    const auto result =
        warped_distance_dirac_cone(endpoint("src"), endpoint("dst"), g, p, grid);

    njson report = report_envelope(config);
    report["config"] = j;
    report["results"] = {{"value", result.value},
                         {"src_mass", result.src_node.mass},
                         {"src_position", result.src_node.position},
                         {"dst_mass", result.dst_node.mass},
                         {"dst_position", result.dst_node.position},
                         {"nodes", result.nodes},
                         {"relaxed_edges", result.relaxed_edges}};
    emit_report(config, std::move(report));
    return 0;
}

} // namespace

int run(const RunConfig& config) {
    try {
        switch (config.command) {
        case Command::dist: return run_dist(config);
        case Command::axioms: return run_axioms(config);
        case Command::obstruct: return run_obstruct(config);
        case Command::warped: return run_warped(config);
        case Command::probe: return run_probe(config);
        }
        throw ConfigError("unknown command");
    } catch (const njson::exception& err) {
        std::cerr << "masscone: config error: " << err.what() << "\n";
        return 2;
    } catch (const Error& err) {
        std::cerr << "masscone: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "masscone: " << err.what() << "\n";
        return 2;
    }
}

} // namespace masscone::cli
