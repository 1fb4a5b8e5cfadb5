#include "masscone/io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json_support.hpp"
#include "masscone/errors.hpp"

namespace masscone::io {

namespace detail {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

njson parse_toml_scalar(const std::string& token, int line_no) {
    const std::string value = trim(token);
    if (value.empty()) throw ConfigError("toml: empty value at line " + std::to_string(line_no));
    if (value.front() == '"') {
        if (value.size() < 2 || value.back() != '"')
            throw ConfigError("toml: unterminated string at line " + std::to_string(line_no));
        return njson(value.substr(1, value.size() - 2));
    }
    if (value == "true") return njson(true);
    if (value == "false") return njson(false);
    try {
        std::size_t used = 0;
        const double num = std::stod(value, &used);
        if (used == value.size()) return njson(num);
    } catch (const std::exception&) {
    }
    throw ConfigError("toml: cannot parse value '" + value + "' at line " + std::to_string(line_no));
}

njson parse_toml_value(const std::string& raw, int line_no) {
    const std::string value = trim(raw);
    if (!value.empty() && value.front() == '[') {
        if (value.back() != ']')
            throw ConfigError("toml: unterminated array at line " + std::to_string(line_no));
        njson arr = njson::array();
        const std::string inner = value.substr(1, value.size() - 2);
        std::string token;
        bool in_string = false;
        for (char c : inner) {
            if (c == '"') in_string = !in_string;
            if (c == ',' && !in_string) {
                if (!trim(token).empty()) arr.push_back(parse_toml_scalar(token, line_no));
                token.clear();
            } else {
                token += c;
            }
        }
        if (!trim(token).empty()) arr.push_back(parse_toml_scalar(token, line_no));
        return arr;
    }
    return parse_toml_scalar(value, line_no);
}

} // namespace

njson parse_toml_lite(const std::string& text) {
    njson root = njson::object();
    njson* section = &root;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("toml: malformed section at line " + std::to_string(line_no));
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (name.empty())
                throw ConfigError("toml: empty section name at line " + std::to_string(line_no));
            root[name] = njson::object();
            section = &root[name];
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("toml: expected key = value at line " + std::to_string(line_no));
        const std::string key = trim(line.substr(0, eq));
        if (key.empty())
            throw ConfigError("toml: empty key at line " + std::to_string(line_no));
        (*section)[key] = parse_toml_value(line.substr(eq + 1), line_no);
    }
    return root;
}

njson load_config_json(const std::string& path) {
    const std::string text = read_file(path);
    if (ends_with(path, ".toml")) return parse_toml_lite(text);
    try {
        return njson::parse(text);
    } catch (const njson::parse_error& err) {
        throw ConfigError(path + ": " + err.what());
    }
}

njson measure_to_json_obj(const DiscreteMeasure& mu) {
    njson j;
    j["dim"] = mu.dim();
    j["points"] = njson::array();
    j["weights"] = njson::array();
    for (const auto& x : mu.points()) j["points"].push_back(x);
    for (double w : mu.weights()) j["weights"].push_back(w);
    return j;
}

DiscreteMeasure measure_from_json_obj(const njson& j, const std::string& context) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("points") || !j.contains("weights"))
        throw ConfigError(context + ": measure needs fields dim, points, weights");
    try {
        const int dim = j.at("dim").get<int>();
        const auto& jp = j.at("points");
        const auto& jw = j.at("weights");
        if (!jp.is_array() || !jw.is_array())
            throw ConfigError(context + ": points and weights must be arrays");
        if (jp.size() != jw.size())
            throw ConfigError(context + ": points and weights must have equal length");
        if (jp.empty()) return DiscreteMeasure::zero(dim);
        std::vector<Point> pts;
        std::vector<double> wts;
        for (const auto& row : jp) {
            Point x = row.get<Point>();
            if (static_cast<int>(x.size()) != dim)
                throw ConfigError(context + ": point dimension does not match dim");
            pts.push_back(std::move(x));
        }
        for (const auto& w : jw) wts.push_back(w.get<double>());
        return DiscreteMeasure(std::move(pts), std::move(wts));
    } catch (const njson::exception& err) {
        throw ConfigError(context + ": " + err.what());
    } catch (const std::invalid_argument& err) {
        throw ConfigError(context + ": " + err.what());
    }
}

double number_or_inf(const njson& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf" || s == "infinity" || s == "+inf")
            return std::numeric_limits<double>::infinity();
        throw ConfigError("field '" + key + "': unknown value '" + s + "'");
    }
    if (!v.is_number()) throw ConfigError("field '" + key + "' must be a number or \"inf\"");
    return v.get<double>();
}

ScalingFunction scaling_from_json_obj(const njson& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ConfigError("scaling function: missing 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    ScalingFunction f;
    if (kind == "ratio") {
        f = scaling_ratio();
    } else if (kind == "identity") {
        f = scaling_identity();
    } else if (kind == "linear_capped") {
        f = scaling_linear_capped(j.value("cap", 1.0));
    } else if (kind == "constant") {
        f = scaling_constant(j.value("value", 1.0));
    } else if (kind == "table") {
        if (!j.contains("masses") || !j.contains("values"))
            throw ConfigError("table scaling needs 'masses' and 'values'");
        f = scaling_table(j.at("masses").get<std::vector<double>>(),
                          j.at("values").get<std::vector<double>>());
    } else {
        throw ConfigError("unknown scaling kind '" + kind + "'");
    }
    if (j.contains("lipschitz")) f.claimed_lipschitz = j.at("lipschitz").get<double>();
    return f;
}

WarpingFunction warping_from_json_obj(const njson& j, double p) {
    if (!j.is_object() || !j.contains("kind")) throw ConfigError("warping: missing 'kind'");
    const std::string kind = j.at("kind").get<std::string>();
    WarpingFunction g;
    g.p = p;
    if (kind == "constant") {
        g.kind = WarpKind::constant;
        g.c = j.value("c", 1.0);
    } else if (kind == "one_plus_wp_to_origin") {
        g.kind = WarpKind::one_plus_wp_to_origin;
    } else if (kind == "one_plus_inf_wp_to_diracs") {
        g.kind = WarpKind::one_plus_inf_wp_to_diracs;
    } else {
        throw ConfigError("unknown warping kind '" + kind + "'");
    }
    return g;
}

GridSpec grid_from_json_obj(const njson& j) {
    if (!j.is_object()) throw ConfigError("grid: expected an object");
    GridSpec g;
    g.mass_min = j.value("mass_min", g.mass_min);
    g.mass_max = j.value("mass_max", g.mass_max);
    g.mass_steps = j.value("mass_steps", g.mass_steps);
    if (j.contains("box_lo")) g.box_lo = j.at("box_lo").get<Point>();
    if (j.contains("box_hi")) g.box_hi = j.at("box_hi").get<Point>();
    g.spatial_steps = j.value("spatial_steps", g.spatial_steps);
    g.stencil_radius = j.value("stencil_radius", g.stencil_radius);
    if (j.contains("refine")) g = g.refined(j.at("refine").get<int>());
    return g;
}

SigmaSampler sigma_from_json_obj(const njson& j) {
    SigmaSampler s;
    if (!j.is_object()) return s;
    const std::string kind = j.value("kind", std::string("geometric_ray"));
    if (kind == "geometric_ray") {
        s.kind = SigmaSampler::Kind::geometric_ray;
    } else if (kind == "segment_grid") {
        s.kind = SigmaSampler::Kind::segment_grid;
    } else if (kind == "random_ball") {
        s.kind = SigmaSampler::Kind::random_ball;
    } else {
        throw ConfigError("unknown sigma sampler kind '" + kind + "'");
    }
    s.dim = j.value("dim", 1);
    s.r_max = j.value("r_max", 64.0);
    s.step = j.value("step", 1.0);
    s.count = j.value("count", static_cast<std::size_t>(64));
    s.seed = j.value("seed", kDefaultSeed);
    return s;
}

ExtendedMetricSpec metric_spec_from_json_obj(const njson& j) {
    if (!j.is_object() || !j.contains("family"))
        throw ConfigError("metric spec: missing 'family'");
    const std::string family = j.at("family").get<std::string>();
    ExtendedMetricSpec spec;
    spec.id = j.value("id", family);
    spec.p = j.value("p", 1.0);
    spec.lambda = j.value("lambda", 1.0);
    spec.q = number_or_inf(j, "q", 2.0);

    if (family == "product_q") {
        spec.family = MetricFamily::product_q;
    } else if (family == "bounded_mass_distance" || family == "bounded_mass") {
        spec.family = MetricFamily::bounded_mass_distance;
        if (j.contains("mass_distance")) {
            const auto& md = j.at("mass_distance");
            const std::string kind = md.value("kind", std::string("discrete"));
            if (kind == "discrete") {
                spec.mass_distance = discrete_mass_distance();
            } else if (kind == "capped") {
                spec.mass_distance = capped_mass_distance(md.value("cap", 1.0));
            } else {
                throw ConfigError("unknown mass distance kind '" + kind + "'");
            }
        } else {
            spec.mass_distance = discrete_mass_distance();
        }
    } else if (family == "bounded_space_with_zero") {
        spec.family = MetricFamily::bounded_space_with_zero;
        if (!j.contains("f")) throw ConfigError("bounded_space_with_zero spec: missing 'f'");
        spec.f = scaling_from_json_obj(j.at("f"));
        spec.diam_bound = j.value("diam_bound", 0.0);
        if (j.contains("domain_points")) {
            spec.domain.kind = Domain::Kind::finite_set;
            spec.domain.points = j.at("domain_points").get<std::vector<Point>>();
        } else {
            spec.domain.kind = Domain::Kind::box;
            spec.domain.box.lo = j.value("domain_lo", Point{0.0});
            spec.domain.box.hi = j.value("domain_hi", Point{1.0});
        }
    } else if (family == "warped_dirac_cone") {
        spec.family = MetricFamily::warped_dirac_cone;
        if (!j.contains("grid")) throw ConfigError("warped spec: missing 'grid'");
        spec.grid = grid_from_json_obj(j.at("grid"));
        spec.warping = j.contains("warping")
                           ? warping_from_json_obj(j.at("warping"), spec.p)
                           : WarpingFunction{WarpKind::constant, 1.0, spec.p, nullptr};
    } else if (family == "custom") {
        throw ConfigError("custom metrics carry in-process evaluators and cannot be loaded");
    } else {
        throw ConfigError("unknown metric family '" + family + "'");
    }
    return spec;
}

njson metric_spec_to_json_obj(const ExtendedMetricSpec& spec) {
    njson j;
    j["family"] = family_name(spec.family);
    j["id"] = spec.id;
    j["p"] = spec.p;
    switch (spec.family) {
    case MetricFamily::product_q:
        j["lambda"] = spec.lambda;
        if (std::isinf(spec.q)) {
            j["q"] = "inf";
        } else {
            j["q"] = spec.q;
        }
        break;
    case MetricFamily::bounded_mass_distance:
        j["lambda"] = spec.lambda;
        j["mass_distance"] = {{"kind", spec.mass_distance.name},
                              {"bound", spec.mass_distance.bound}};
        break;
    case MetricFamily::bounded_space_with_zero: {
        njson f;
        f["kind"] = spec.f.name;
        if (spec.f.claimed_lipschitz) f["lipschitz"] = *spec.f.claimed_lipschitz;
        j["f"] = f;
        j["diam_bound"] = spec.diam_bound;
        if (spec.domain.kind == Domain::Kind::box) {
            j["domain_lo"] = spec.domain.box.lo;
            j["domain_hi"] = spec.domain.box.hi;
        } else {
            j["domain_points"] = spec.domain.points;
        }
        break;
    }
    case MetricFamily::warped_dirac_cone: {
        njson g;
        switch (spec.warping.kind) {
        case WarpKind::constant:
            g["kind"] = "constant";
            g["c"] = spec.warping.c;
            break;
        case WarpKind::one_plus_wp_to_origin:
            g["kind"] = "one_plus_wp_to_origin";
            break;
        case WarpKind::one_plus_inf_wp_to_diracs:
            g["kind"] = "one_plus_inf_wp_to_diracs";
            break;
        case WarpKind::custom:
            g["kind"] = "custom";
            break;
        }
        j["warping"] = g;
        j["grid"] = {{"mass_min", spec.grid.mass_min},
                     {"mass_max", spec.grid.mass_max},
                     {"mass_steps", spec.grid.mass_steps},
                     {"box_lo", spec.grid.box_lo},
                     {"box_hi", spec.grid.box_hi},
                     {"spatial_steps", spec.grid.spatial_steps},
                     {"stencil_radius", spec.grid.stencil_radius}};
        break;
    }
    case MetricFamily::custom:
        j["note"] = "in-process evaluator";
        break;
    }
    return j;
}

njson witness_to_json_obj(const ViolationWitness& w) {
    njson j;
    j["violated"] = w.violated;
    j["lhs"] = w.lhs;
    j["rhs"] = w.rhs;
    j["margin"] = w.margin;
    j["trial"] = w.trial;
    if (!w.note.empty()) j["note"] = w.note;
    j["measures"] = njson::array();
    for (const auto& m : w.measures) j["measures"].push_back(measure_to_json_obj(m));
    return j;
}

njson axiom_report_to_json_obj(const AxiomReport& report) {
    njson j;
    j["metric"] = report.metric_id;
    j["axiom"] = axiom_name(report.axiom);
    j["trials"] = report.trials;
    j["checks"] = report.checks;
    j["tolerance"] = report.tolerance;
    j["seed"] = report.seed;
    j["failures"] = report.witnesses.size();
    j["witnesses"] = njson::array();
    for (const auto& w : report.witnesses) j["witnesses"].push_back(witness_to_json_obj(w));
    return j;
}

} // namespace detail

DiscreteMeasure load_measure(const std::string& path) {
    const std::string text = [&] {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ConfigError("cannot open measure file: " + path);
        std::ostringstream out;
        out << in.rdbuf();
        return out.str();
    }();
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0)
        return parse_measure_csv(text);
    return parse_measure_json(text);
}

DiscreteMeasure parse_measure_json(const std::string& text) {
    try {
        return detail::measure_from_json_obj(detail::njson::parse(text), "measure");
    } catch (const detail::njson::parse_error& err) {
        throw ConfigError(std::string("measure JSON: ") + err.what());
    }
}

DiscreteMeasure parse_measure_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<Point> pts;
    std::vector<double> wts;
    int dim = -1;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string row = [&] {
            std::string s = line;
            if (const auto hash = s.find('#'); hash != std::string::npos) s = s.substr(0, hash);
            return s;
        }();
        bool blank = true;
        for (char c : row)
            if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
        if (blank) continue;

        std::vector<double> values;
        std::istringstream cells(row);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            try {
                values.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ConfigError("measure CSV: bad number at line " + std::to_string(line_no));
            }
        }
        if (values.size() < 2)
            throw ConfigError("measure CSV: need n coordinates and a weight at line " +
                              std::to_string(line_no));
        if (dim < 0) dim = static_cast<int>(values.size()) - 1;
        if (static_cast<int>(values.size()) - 1 != dim)
            throw ConfigError("measure CSV: inconsistent column count at line " +
                              std::to_string(line_no));
        wts.push_back(values.back());
        values.pop_back();
        pts.push_back(std::move(values));
    }
    if (pts.empty()) throw ConfigError("measure CSV: no atom rows found");
    try {
        return DiscreteMeasure(std::move(pts), std::move(wts));
    } catch (const std::invalid_argument& err) {
        throw ConfigError(std::string("measure CSV: ") + err.what());
    }
}

std::string measure_to_json(const DiscreteMeasure& mu) {
    return detail::measure_to_json_obj(mu).dump(2);
}

std::string measure_to_csv(const DiscreteMeasure& mu) {
    std::ostringstream out;
    out.precision(17);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        for (double c : mu.point(i)) out << c << ",";
        out << mu.weight(i) << "\n";
    }
    return out.str();
}

ExtendedMetric load_metric(const std::string& path) {
    return ExtendedMetric(detail::metric_spec_from_json_obj(detail::load_config_json(path)));
}

ExtendedMetricSpec parse_metric_spec(const std::string& text, bool toml) {
    if (toml) return detail::metric_spec_from_json_obj(detail::parse_toml_lite(text));
    try {
        return detail::metric_spec_from_json_obj(detail::njson::parse(text));
    } catch (const detail::njson::parse_error& err) {
        throw ConfigError(std::string("metric spec JSON: ") + err.what());
    }
}

std::string toml_to_json(const std::string& toml_text) {
    return detail::parse_toml_lite(toml_text).dump(2);
}

} // namespace masscone::io
