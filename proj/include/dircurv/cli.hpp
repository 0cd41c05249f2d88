#pragma once

// Command-line front end. Every subcommand prints one JSON document to the
// output stream. Exit codes: 0 success, 2 input error, 3 numerical failure.
//
//   report  --body F --point P [--dir D]...   curvature per direction (all u^j by default)
//   extrema --body F --point P                min/max curvature over tangent directions
//   goldman --body F --point P --j J          general and closed k_G, ratio k_G / (2 kappa)
//   verify  --body F --point P [--dir D]...   brute-force oracle residuals
//   gauge   --body F --point P                Minkowski functional
//
// Points and directions are comma-separated decimals; indices are 1-based.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dircurv/body.hpp"
#include "dircurv/curvature.hpp"
#include "dircurv/error.hpp"
#include "dircurv/goldman.hpp"
#include "dircurv/io.hpp"
#include "dircurv/oracle.hpp"

namespace dircurv::cli {

using ojson = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

// Verification thresholds reported by `verify`.
inline constexpr double kGammaAbsTol = 1e-4;
inline constexpr double kGammaRelTol = 0.02;
inline constexpr double kRadiusRelTol = 0.005;

inline Vec parse_csv(std::string_view text, std::string_view what) {
    Vec out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        std::string_view tok = text.substr(start, comma - start);
        while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
        while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
        if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size() || !std::isfinite(v))
            throw Error(ErrorCode::InvalidArgument,
                        "cannot parse " + std::string(what) + " component \"" + std::string(tok) + "\"",
                        std::string(what));
        out.push_back(v);
        start = comma + 1;
    }
    return out;
}

// Collects warnings; the same (code, message) pair is recorded once.
class Warnings {
public:
    void add(const std::string& code, const std::string& message) {
        if (seen_.insert({code, message}).second) list_.push_back({{"code", code}, {"message", message}});
    }
    ojson json() const {
        ojson arr = ojson::array();
        for (const auto& w : list_) arr.push_back(w);
        return arr;
    }

private:
    std::set<std::pair<std::string, std::string>> seen_;
    std::vector<ojson> list_;
};

struct Context {
    BodySpec spec;
    ImplicitBody body;
    BoundaryPoint point;
    TangentFrame frame;
};

inline Context load(const std::string& body_path, const std::string& point_csv) {
    BodySpec spec = load_body_spec(body_path);
    ImplicitBody body = make_body(spec);
    const Vec x = parse_csv(point_csv, "point");
    BoundaryPoint p = validate_point(body, x);
    TangentFrame fr = tangent_frame(p);
    return Context{std::move(spec), std::move(body), std::move(p), std::move(fr)};
}

inline ojson envelope(const std::string& command, const Context& ctx) {
    ojson j;
    j["command"] = command;
    j["body"] = {{"hash", body_hash(ctx.spec)}, {"n", ctx.spec.n}, {"f", ctx.spec.f}, {"delta", ctx.spec.delta}};
    j["point"] = json_vector(ctx.point.xi);
    j["pivot"] = ctx.point.pivot + 1;
    j["dual"] = json_vector(ctx.point.dual);
    return j;
}

struct LabeledDirection {
    std::string label;
    Vec u;
};

inline std::vector<LabeledDirection> directions(const Context& ctx, const std::vector<std::string>& dirs) {
    std::vector<LabeledDirection> out;
    if (dirs.empty()) {
        for (std::size_t a = 0; a < ctx.frame.basis.size(); ++a)
            out.push_back({"u" + std::to_string(ctx.frame.indices[a] + 1), ctx.frame.basis[a]});
    } else {
        for (std::size_t a = 0; a < dirs.size(); ++a) {
            Vec u = parse_csv(dirs[a], "dir");
            if (u.size() != ctx.point.size())
                throw Error(ErrorCode::DimensionMismatch, "direction has wrong dimension", "dir" + std::to_string(a + 1));
            out.push_back({"dir" + std::to_string(a + 1), std::move(u)});
        }
    }
    return out;
}

inline ojson curvature_entry(const std::string& label, const DirectionalCurvature& c, Warnings& warnings) {
    if (c.convexity_warning)
        warnings.add("ConvexityWarning", label + ": negative curvature " + format_number(c.kappa_hat) +
                                             " contradicts the convexity hypothesis");
    ojson e;
    e["label"] = label;
    e["direction"] = json_vector(c.direction);
    e["gamma_hat"] = json_number(c.gamma_hat);
    e["kappa_hat"] = json_number(c.kappa_hat);
    e["radius_hat"] = json_number(c.radius_hat);
    return e;
}

inline ojson cmd_report(const Context& ctx, const std::vector<std::string>& dirs, Warnings& warnings) {
    ojson j = envelope("report", ctx);
    ojson results = ojson::array();
    for (const auto& d : directions(ctx, dirs))
        results.push_back(curvature_entry(d.label, kappa_directional(ctx.point, d.u), warnings));
    j["results"] = std::move(results);
    return j;
}

inline ojson cmd_extrema(const Context& ctx, Warnings& warnings) {
    ojson j = envelope("extrema", ctx);
    const CurvatureExtrema ex = extrema(ctx.point, ctx.frame);
    if (ex.kappa_min < -kConvexityTolerance)
        warnings.add("ConvexityWarning", "minimum curvature " + format_number(ex.kappa_min) +
                                             " contradicts the convexity hypothesis");
    auto radius = [](double k) { return k > 0.0 ? curvature_radius(k) : std::numeric_limits<double>::infinity(); };
    j["results"] = {{{"kappa_min", json_number(ex.kappa_min)},
                     {"kappa_max", json_number(ex.kappa_max)},
                     {"radius_min_curvature", json_number(radius(ex.kappa_min))},
                     {"radius_max_curvature", json_number(radius(ex.kappa_max))},
                     {"dir_min", json_vector(ex.dir_min)},
                     {"dir_max", json_vector(ex.dir_max)}}};
    return j;
}

inline ojson cmd_goldman(const Context& ctx, int j_one_based, Warnings& warnings) {
    if (j_one_based < 1 || static_cast<std::size_t>(j_one_based) > ctx.point.size())
        throw Error(ErrorCode::InvalidIndex, "tangent index out of range", std::to_string(j_one_based));
    const auto j = static_cast<std::size_t>(j_one_based - 1);
    const PlaneSystem sys = plane_system(ctx.point, j);
    const Vec tan = goldman_tangent(ctx.point, sys);
    const double general = goldman_curvature_general(ctx.body, ctx.point, sys);
    const double closed = goldman_curvature_closed(ctx.point, j);

    Vec u(ctx.point.size(), 0.0);
    u[j] = 1.0;
    u[ctx.point.pivot] = 0.0 - ctx.point.grad[j] / ctx.point.grad[ctx.point.pivot];
    const DirectionalCurvature c = kappa_directional(ctx.point, u);

    ojson out = envelope("goldman", ctx);
    ojson r;
    r["j"] = j_one_based;
    r["tangent"] = json_vector(tan);
    r["kappa_hat"] = json_number(c.kappa_hat);
    r["k_general"] = json_number(general);
    r["k_closed"] = json_number(closed);
    if (c.kappa_hat != 0.0) {
        r["ratio"] = json_number(closed / (2.0 * c.kappa_hat));
    } else {
        r["ratio"] = nullptr;
        warnings.add("RatioUndefined", "kappa_hat is zero; k_G / (2 kappa_hat) is undefined");
    }
    r["general_minus_closed"] = json_number(general - closed);
    const std::string label = "u" + std::to_string(j_one_based);
    if (c.convexity_warning)
        warnings.add("ConvexityWarning", label + ": negative curvature " + format_number(c.kappa_hat) +
                                             " contradicts the convexity hypothesis");
    out["results"] = ojson::array({r});
    return out;
}

inline ojson cmd_verify(const Context& ctx, const std::vector<std::string>& dirs, double eps, Warnings& warnings) {
    ojson out = envelope("verify", ctx);
    if (eps <= 0.0) eps = std::min(ctx.body.delta() / 4.0, 0.05);
    ojson results = ojson::array();
    for (const auto& d : directions(ctx, dirs)) {
        const DirectionalCurvature c = kappa_directional(ctx.point, d.u);
        const GammaEstimate est = gamma_estimate(ctx.body, ctx.point, d.u);
        const RadiusContainment rc = radius_containment(ctx.body, ctx.point, d.u, eps);
        const double target = c.radius_hat / norm(ctx.point.dual);

        const double gamma_residual = est.value - c.gamma_hat;
        const bool gamma_ok = std::abs(gamma_residual) <= std::max(kGammaAbsTol, kGammaRelTol * std::abs(c.gamma_hat));
        double radius_residual = 0.0;
        bool radius_ok;
        if (std::isinf(target) || std::isinf(rc.value)) {
            radius_ok = std::isinf(target) && std::isinf(rc.value);
            radius_residual = radius_ok ? 0.0 : std::numeric_limits<double>::infinity();
        } else {
            radius_residual = (rc.value - target) / target;
            radius_ok = std::abs(radius_residual) <= kRadiusRelTol;
        }

        if (c.convexity_warning)
            warnings.add("ConvexityWarning", d.label + ": negative curvature " + format_number(c.kappa_hat) +
                                                 " contradicts the convexity hypothesis");
        if (est.extra_roots || rc.extra_roots)
            warnings.add("ExtraRoots", d.label + ": sampling circle met the boundary more than twice");
        if (rc.flat) warnings.add("FlatSection", d.label + ": section is flat at the sampled scale");

        ojson e;
        e["label"] = d.label;
        e["direction"] = json_vector(d.u);
        e["gamma_hat"] = json_number(c.gamma_hat);
        e["gamma_estimate"] = json_number(est.value);
        e["gamma_residual"] = json_number(gamma_residual);
        e["gamma_ok"] = gamma_ok;
        e["radii"] = json_vector(est.radii);
        e["quotients"] = json_vector(est.quotients);
        e["radius_target"] = json_number(target);
        e["radius_containment"] = json_number(rc.value);
        e["radius_eps"] = json_number(rc.eps);
        e["radius_relative_residual"] = json_number(radius_residual);
        e["radius_ok"] = radius_ok;
        results.push_back(std::move(e));
    }
    warnings.add("FixedBasePoint",
                 "oracle limits are taken at the given point only; the base point is not varied");
    out["results"] = std::move(results);
    return out;
}

inline ojson cmd_gauge(const std::string& body_path, const std::string& point_csv, BodySpec& spec_out) {
    spec_out = load_body_spec(body_path);
    const ImplicitBody body = make_body(spec_out);
    const Vec x = parse_csv(point_csv, "point");
    const double rho = minkowski_gauge(body, x);
    ojson j;
    j["command"] = "gauge";
    j["body"] = {{"hash", body_hash(spec_out)}, {"n", spec_out.n}, {"f", spec_out.f}, {"delta", spec_out.delta}};
    j["point"] = json_vector(x);
    const Vec projected = scaled(x, 1.0 / rho);
    j["results"] = ojson::array({{{"gauge", json_number(rho)},
                                  {"boundary_point", json_vector(projected)},
                                  {"f_at_boundary_point", json_number(body.value(projected))}}});
    return j;
}

// Aligned plain-text rendering of the scalar fields of each result.
inline std::string render_table(const ojson& doc) {
    if (!doc.contains("results")) return {};
    std::vector<std::string> columns;
    for (const auto& r : doc.at("results"))
        for (const auto& [key, value] : r.items())
            if (!value.is_array() && !value.is_object() &&
                std::find(columns.begin(), columns.end(), key) == columns.end())
                columns.push_back(key);
    std::vector<std::vector<std::string>> rows{columns};
    for (const auto& r : doc.at("results")) {
        std::vector<std::string> row;
        for (const auto& c : columns) {
            if (!r.contains(c)) row.emplace_back("-");
            else if (r.at(c).is_string()) row.push_back(r.at(c).get<std::string>());
            else if (r.at(c).is_number_float()) {
                std::ostringstream s;
                s << std::setprecision(10) << r.at(c).get<double>();
                row.push_back(s.str());
            } else row.push_back(r.at(c).dump());
        }
        rows.push_back(std::move(row));
    }
    std::vector<std::size_t> width(columns.size(), 0);
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    std::ostringstream out;
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << (c ? "  " : "") << std::left << std::setw(static_cast<int>(width[c])) << row[c];
        out << '\n';
    }
    return out.str();
}

inline void print_error(std::ostream& out, const std::string& code, const std::string& message,
                        const std::string& location) {
    ojson e;
    e["code"] = code;
    e["message"] = message;
    e["location"] = location;
    out << e.dump() << '\n';
}

// JSON goes to `out`; with --pretty an aligned table follows on `err`, so
// `out` always holds exactly one JSON document.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Directional curvature of implicitly defined convex bodies", "dircurv"};
    app.require_subcommand(1);

    std::string body_path, point_csv;
    std::vector<std::string> dirs;
    int j_index = 0;
    double eps = 0.0;
    bool pretty = false;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--body", body_path, "body JSON file")->required();
        sub->add_option("--point", point_csv, "boundary point, comma-separated")->required();
        sub->add_flag("--pretty", pretty, "also print an aligned table to stderr");
    };
    auto* report = app.add_subcommand("report", "curvature per tangent direction");
    common(report);
    report->add_option("--dir", dirs, "tangent direction, comma-separated (repeatable)");
    auto* ext = app.add_subcommand("extrema", "minimum and maximum curvature over tangent directions");
    common(ext);
    auto* gold = app.add_subcommand("goldman", "intersection-curve curvature cross-check");
    common(gold);
    gold->add_option("--j", j_index, "tangent index (1-based, not the pivot)")->required();
    auto* ver = app.add_subcommand("verify", "brute-force oracle residuals");
    common(ver);
    ver->add_option("--dir", dirs, "tangent direction, comma-separated (repeatable)");
    ver->add_option("--eps", eps, "neighbourhood radius for the ball-containment check");
    auto* gauge = app.add_subcommand("gauge", "Minkowski functional of a point");
    common(gauge);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        print_error(out, "UsageError", e.what(), "");
        return kExitInput;
    }

    try {
        Warnings warnings;
        ojson doc;
        if (gauge->parsed()) {
            BodySpec spec;
            doc = cmd_gauge(body_path, point_csv, spec);
        } else {
            const Context ctx = load(body_path, point_csv);
            if (report->parsed()) doc = cmd_report(ctx, dirs, warnings);
            else if (ext->parsed()) doc = cmd_extrema(ctx, warnings);
            else if (gold->parsed()) doc = cmd_goldman(ctx, j_index, warnings);
            else doc = cmd_verify(ctx, dirs, eps, warnings);
        }
        doc["warnings"] = warnings.json();
        out << doc.dump() << '\n';
        if (pretty) err << render_table(doc);
        return kExitOk;
    } catch (const Error& e) {
        print_error(out, std::string(to_string(e.code())), e.detail(), e.location());
        return is_input_error(e.code()) ? kExitInput : kExitNumerical;
    }
}

}  // namespace dircurv::cli
