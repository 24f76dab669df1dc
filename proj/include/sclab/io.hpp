#pragma once

// JSON and CSV serialization for the lab's value types. Doubles are written by
// nlohmann::json, which emits the shortest representation that round-trips.

#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sclab/compactness.hpp"
#include "sclab/error.hpp"
#include "sclab/lagrangian.hpp"
#include "sclab/loops.hpp"
#include "sclab/paths.hpp"
#include "sclab/shift_calculus.hpp"
#include "sclab/weights.hpp"

namespace sclab::io {

using nlohmann::json;

namespace detail {

inline json complex_pair(cplx z) { return json::array({z.real(), z.imag()}); }

inline cplx parse_complex(const json& j)
{
    if (j.is_number())
        return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2)
        throw ContractError("expected a number or a [re, im] pair");
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

template <typename T>
T get_field(const json& j, const char* key)
{
    if (!j.contains(key))
        throw ContractError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ContractError(std::string("field '") + key + "': " + e.what());
    }
}

} // namespace detail

// ---- weights ---------------------------------------------------------------

inline json to_json(const WeightFunction& f)
{
    json j;
    j["name"] = f.name();
    std::visit(
        [&j](const auto& r) {
            using R = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<R, PowerRule>) {
                j["rule"] = "power";
                j["exponent"] = r.exponent;
            } else if constexpr (std::is_same_v<R, TableRule>) {
                j["rule"] = "table";
                j["values"] = r.values;
                j["extension"] = {{"kind", "power"}, {"exponent", r.extension_exponent}};
            } else {
                j["rule"] = "composite";
                j["factor"] = r.factor;
                j["base"] = to_json(*r.base);
            }
        },
        f.rule());
    if (f.normalization() != 1.0)
        j["normalization"] = f.normalization();
    return j;
}

inline WeightFunction weight_from_json(const json& j)
{
    const auto rule = detail::get_field<std::string>(j, "rule");
    const std::string name = j.value("name", std::string{});
    if (rule == "power")
        return WeightFunction::power(detail::get_field<double>(j, "exponent"), name);
    if (rule == "table") {
        double ext = 1.0;
        if (j.contains("extension")) {
            const auto& e = j.at("extension");
            const std::string kind = e.value("kind", std::string("power"));
            if (kind != "power")
                throw ContractError("table weight extension '" + kind + "' is not an unbounded rule");
            ext = detail::get_field<double>(e, "exponent");
        }
        return WeightFunction::table(detail::get_field<std::vector<double>>(j, "values"), ext, name);
    }
    if (rule == "composite")
        return WeightFunction::scaled(detail::get_field<double>(j, "factor"), weight_from_json(j.at("base")), name);
    throw ContractError("unknown weight rule '" + rule + "'");
}

inline json to_json(const ScaleVector& x)
{
    json j;
    j["weight_name"] = x.weight()->name();
    json coeffs = json::array();
    for (auto c : x.coefficients()) {
        if (x.is_complex())
            coeffs.push_back(detail::complex_pair(c));
        else
            coeffs.push_back(c.real());
    }
    j["coefficients"] = coeffs;
    return j;
}

inline ScaleVector scale_vector_from_json(const json& j, const WeightPtr& weight)
{
    const auto name = detail::get_field<std::string>(j, "weight_name");
    if (name != weight->name())
        throw ContractError("scale vector refers to weight '" + name + "', got '" + weight->name() + "'");
    const auto& arr = j.at("coefficients");
    std::vector<cplx> c;
    bool complex = false;
    for (const auto& e : arr) {
        complex = complex || e.is_array();
        c.push_back(detail::parse_complex(e));
    }
    return ScaleVector(weight, std::move(c), complex);
}

// ---- loops -----------------------------------------------------------------

inline json to_json(const FourierLoop& v)
{
    json modes = json::array();
    for (int l = -v.bandwidth(); l <= v.bandwidth(); ++l) {
        if (v.components() == 1) {
            modes.push_back(detail::complex_pair(v.at(l)));
        } else {
            json tuple = json::array();
            for (int c = 0; c < v.components(); ++c)
                tuple.push_back(detail::complex_pair(v.at(l, c)));
            modes.push_back(tuple);
        }
    }
    json j{{"bandwidth", v.bandwidth()}, {"modes", modes}};
    if (v.components() != 1)
        j["components"] = v.components();
    return j;
}

inline FourierLoop fourier_loop_from_json(const json& j)
{
    const int m = detail::get_field<int>(j, "bandwidth");
    const int n = j.value("components", 1);
    const auto& modes = j.at("modes");
    if (modes.size() != static_cast<std::size_t>(2 * m + 1))
        throw ContractError("FourierLoop JSON: expected 2M+1 modes");
    std::vector<cplx> flat;
    for (const auto& e : modes) {
        if (n == 1) {
            flat.push_back(detail::parse_complex(e));
        } else {
            if (!e.is_array() || e.size() != static_cast<std::size_t>(n))
                throw ContractError("FourierLoop JSON: each mode needs one pair per component");
            for (const auto& c : e)
                flat.push_back(detail::parse_complex(c));
        }
    }
    return FourierLoop(m, std::move(flat), n);
}

inline json to_json(const GridLoop& g)
{
    json samples = json::array();
    for (auto s : g.samples())
        samples.push_back(detail::complex_pair(s));
    json j{{"resolution", g.resolution()}, {"samples", samples}};
    if (g.components() != 1)
        j["components"] = g.components();
    if (g.aliasing_warning)
        j["aliasing_warning"] = true;
    return j;
}

inline GridLoop grid_loop_from_json(const json& j)
{
    const auto p = detail::get_field<std::size_t>(j, "resolution");
    std::vector<cplx> s;
    for (const auto& e : j.at("samples"))
        s.push_back(detail::parse_complex(e));
    return GridLoop(p, std::move(s), j.value("components", 1));
}

/// CSV with columns tau,defect (plus the mean-value bound).
inline std::string decay_csv(const std::vector<ShiftDecayRow>& rows)
{
    std::ostringstream os;
    os.precision(17);
    os << "tau,defect,lipschitz_bound\n";
    for (const auto& r : rows)
        os << r.tau << ',' << r.defect << ',' << r.lipschitz_bound << '\n';
    return os.str();
}

// ---- paths -----------------------------------------------------------------

inline json to_json(const GridPath& v)
{
    json samples = json::array();
    for (std::size_t i = 0; i < v.points(); ++i) {
        auto r = v.row(i);
        samples.push_back(std::vector<double>(r.begin(), r.end()));
    }
    json j{{"L", v.half_width()}, {"P", v.points()}, {"samples", samples}};
    j["weight_name"] = v.weight() ? json(v.weight()->name()) : json(nullptr);
    return j;
}

inline GridPath grid_path_from_json(const json& j, const WeightPtr& weight)
{
    const auto l = detail::get_field<double>(j, "L");
    const auto p = detail::get_field<std::size_t>(j, "P");
    const auto& samples = j.at("samples");
    if (samples.size() != p)
        throw ContractError("GridPath JSON: expected P samples");
    if (p == 0 || samples.at(0).empty())
        throw ContractError("GridPath JSON: empty samples");
    const auto& wname = j.at("weight_name");
    if (!wname.is_null()) {
        if (!weight || weight->name() != wname.get<std::string>())
            throw ContractError("GridPath JSON: weight '" + wname.get<std::string>() + "' not supplied");
    }
    GridPath v(l, p, samples.at(0).size(), wname.is_null() ? nullptr : weight);
    for (std::size_t i = 0; i < p; ++i) {
        const auto row = samples.at(i).get<std::vector<double>>();
        if (row.size() != v.dim())
            throw ContractError("GridPath JSON: ragged samples");
        std::copy(row.begin(), row.end(), v.row(i).begin());
    }
    return v;
}

inline json to_json(const LevelSpec& s)
{
    return json{{"p", s.p}, {"deltas", s.deltas}, {"weight", to_json(*s.weight)}, {"K", s.max_level}};
}

inline LevelSpec level_spec_from_json(const json& j)
{
    LevelSpec s;
    s.p = detail::get_field<double>(j, "p");
    s.deltas = detail::get_field<std::vector<double>>(j, "deltas");
    s.weight = make_weight(weight_from_json(j.at("weight")));
    s.max_level = detail::get_field<int>(j, "K");
    s.validate();
    return s;
}

// ---- shift calculus ----------------------------------------------------------

inline json to_json(const FDReport& r)
{
    json levels = json::array();
    for (const auto& l : r.levels) {
        json e{{"j", l.level}, {"errors", l.errors}, {"at_roundoff", l.at_roundoff}};
        e["order"] = l.order ? json(*l.order) : json(nullptr);
        levels.push_back(e);
    }
    return json{{"m", r.m}, {"eps", r.eps}, {"levels", levels}, {"inconclusive", r.inconclusive}};
}

inline std::string fd_csv(const FDReport& r)
{
    std::ostringstream os;
    os.precision(17);
    os << "m,j,eps,error,order\n";
    for (const auto& l : r.levels)
        for (std::size_t i = 0; i < r.eps.size(); ++i) {
            os << r.m << ',' << l.level << ',' << r.eps[i] << ',' << l.errors[i] << ',';
            if (l.order)
                os << *l.order;
            os << '\n';
        }
    return os.str();
}

// ---- compactness -------------------------------------------------------------

inline json to_json(const DecayCertificate& c)
{
    std::vector<bool> verdicts(c.entry_pass.begin(), c.entry_pass.end());
    return json{{"kind", c.kind},
                {"params", c.params},
                {"measured", c.measured},
                {"bound_paper", c.bound_quoted},
                {"bound_derived", c.bound_derived},
                {"entry_pass", verdicts},
                {"decays", c.decays},
                {"pass", c.pass}};
}

inline std::string certificate_csv(const DecayCertificate& c)
{
    std::ostringstream os;
    os.precision(17);
    os << "param,measured,bound_paper,bound_derived,pass\n";
    for (std::size_t i = 0; i < c.params.size(); ++i)
        os << c.params[i] << ',' << c.measured[i] << ',' << c.bound_quoted[i] << ',' << c.bound_derived[i] << ','
           << (c.entry_pass[i] ? 1 : 0) << '\n';
    return os.str();
}

// ---- lagrangian --------------------------------------------------------------

inline json to_json(const LagPath& g)
{
    json samples = json::array();
    for (auto s : g.samples())
        samples.push_back(detail::complex_pair(s));
    return json{{"P", g.points()}, {"samples", samples}, {"level", g.level()}};
}

inline LagPath lag_path_from_json(const json& j)
{
    const auto p = detail::get_field<std::size_t>(j, "P");
    std::vector<cplx> s;
    for (const auto& e : j.at("samples"))
        s.push_back(detail::parse_complex(e));
    if (s.size() != p)
        throw ContractError("LagPath JSON: expected P samples");
    return LagPath(std::move(s), j.value("level", 0));
}

inline json to_json(const BoundaryResidual& r)
{
    return json{{"level", r.level},
                {"endpoint", r.endpoint},
                {"l", r.l},
                {"residual", r.residual},
                {"stencil_order", r.stencil_order}};
}

} // namespace sclab::io
