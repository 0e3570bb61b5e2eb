// Copyright 2026 The deepmix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "deepmix/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <regex>
#include <set>
#include <sstream>

#include "deepmix/errors.hpp"

namespace deepmix::harness {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& why) {
    throw ConfigError("config key '" + key + "': " + why);
}

class Reader {
public:
    Reader(const json& obj, std::string prefix) : obj_(obj), prefix_(std::move(prefix)) {
        if (!obj_.is_object()) fail(prefix_.empty() ? "<root>" : prefix_, "expected an object");
    }

    std::string path(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

    bool has(const std::string& key) {
        used_.insert(key);
        return obj_.contains(key);
    }

    const json& at(const std::string& key) {
        if (!has(key)) fail(path(key), "required key is missing");
        return obj_.at(key);
    }

    std::int64_t integer(const std::string& key, std::int64_t lo, std::int64_t hi) {
        return integer_value(at(key), path(key), lo, hi);
    }

    std::int64_t integer_or(const std::string& key, std::int64_t fallback, std::int64_t lo, std::int64_t hi) {
        return has(key) ? integer(key, lo, hi) : fallback;
    }

    double number(const std::string& key) {
        const json& v = at(key);
        if (!v.is_number()) fail(path(key), "expected a number");
        return v.get<double>();
    }

    double angle(const std::string& key) { return parse_angle(at(key), path(key)); }

    std::vector<int> int_list(const std::string& key, std::int64_t lo, std::int64_t hi) {
        const json& v = at(key);
        if (!v.is_array() || v.empty()) fail(path(key), "expected a non-empty array of integers");
        std::vector<int> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            out.push_back(static_cast<int>(integer_value(v[i], path(key) + "[" + std::to_string(i) + "]", lo, hi)));
        }
        return out;
    }

    std::vector<double> number_list(const std::string& key) {
        const json& v = at(key);
        if (!v.is_array() || v.empty()) fail(path(key), "expected a non-empty array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) fail(path(key) + "[" + std::to_string(i) + "]", "expected a number");
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    std::string string(const std::string& key) {
        const json& v = at(key);
        if (!v.is_string()) fail(path(key), "expected a string");
        return v.get<std::string>();
    }

    void finish() const {
        for (auto it = obj_.begin(); it != obj_.end(); ++it) {
            if (!used_.contains(it.key())) fail(path(it.key()), "unknown key");
        }
    }

    static std::int64_t integer_value(const json& v, const std::string& where, std::int64_t lo, std::int64_t hi) {
        if (!v.is_number_integer()) fail(where, "expected an integer");
        if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(hi)) {
            fail(where, "value out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        }
        const auto x = v.get<std::int64_t>();
        if (x < lo || x > hi) fail(where, "value " + std::to_string(x) + " out of range [" + std::to_string(lo) + ", " +
                                              std::to_string(hi) + "]");
        return x;
    }

private:
    const json& obj_;
    std::string prefix_;
    std::set<std::string> used_;
};

constexpr std::int64_t kBig = std::numeric_limits<std::int32_t>::max();

void check_unique_sorted(std::vector<int>& v, const std::string& key) {
    std::vector<int> s = v;
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) fail(key, "duplicate entries");
}

std::vector<std::vector<Complex>> complex_matrix(const json& re, const json* im, const std::string& key) {
    if (!re.is_array() || re.empty()) fail(key + ".re", "expected a square array of numbers");
    const std::size_t n = re.size();
    std::vector<std::vector<Complex>> m(n, std::vector<Complex>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (!re[i].is_array() || re[i].size() != n) fail(key + ".re", "expected a square array of numbers");
        if (im && (!(*im)[i].is_array() || (*im)[i].size() != n)) fail(key + ".im", "shape differs from re");
        for (std::size_t j = 0; j < n; ++j) {
            if (!re[i][j].is_number()) fail(key + ".re", "expected numbers");
            double b = 0.0;
            if (im) {
                if (!(*im)[i][j].is_number()) fail(key + ".im", "expected numbers");
                b = (*im)[i][j].get<double>();
            }
            m[i][j] = {re[i][j].get<double>(), b};
        }
    }
    return m;
}

RhoSpec rho_spec(const json& v, const std::string& key, int s_size) {
    Reader r(v, key);
    const std::string kind = r.string("kind");
    RhoSpec out = PureRho{};
    const auto d = std::int64_t{1} << s_size;
    if (kind == "ginibre") {
        out = GinibreRho{static_cast<std::size_t>(r.integer_or("rank", 0, 0, d))};
    } else if (kind == "flat") {
        out = FlatRho{static_cast<std::size_t>(r.integer("rank", 1, d))};
    } else if (kind == "pure") {
        out = PureRho{};
    } else if (kind == "explicit") {
        const json& re = r.at("re");
        const json* im = r.has("im") ? &v.at("im") : nullptr;
        if (im && (!im->is_array() || im->size() != re.size())) fail(key + ".im", "shape differs from re");
        const auto m = complex_matrix(re, im, key);
        if (static_cast<std::int64_t>(m.size()) != d) {
            fail(key + ".re", "dimension " + std::to_string(m.size()) + " does not match 2^s_size = " + std::to_string(d));
        }
        OperatorMatrix mat(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        for (Eigen::Index i = 0; i < mat.rows(); ++i) {
            for (Eigen::Index j = 0; j < mat.cols(); ++j) mat(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
        try {
            out = DensityMatrix::from_matrix(std::move(mat));
        } catch (const std::invalid_argument& e) {
            fail(key, e.what());
        }
    } else {
        fail(key + ".kind", "expected one of ginibre, flat, pure, explicit; got '" + kind + "'");
    }
    r.finish();
    return out;
}

EStateSpec e_state_spec(const json& v, const std::string& key) {
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "plus") return PlusStates{};
        if (s == "random") return RandomStates{};
        fail(key, "expected 'plus', 'random' or an explicit object; got '" + s + "'");
    }
    Reader r(v, key);
    const std::string kind = r.string("kind");
    EStateSpec out;
    if (kind == "plus") {
        out = PlusStates{};
    } else if (kind == "random") {
        out = RandomStates{};
    } else if (kind == "explicit") {
        const json& states = r.at("states");
        if (!states.is_array()) fail(key + ".states", "expected an array of [[re, im], [re, im]] pairs");
        std::vector<Amplitudes> list;
        for (std::size_t i = 0; i < states.size(); ++i) {
            const std::string where = key + ".states[" + std::to_string(i) + "]";
            const json& s = states[i];
            if (!s.is_array() || s.size() != 2) fail(where, "expected two [re, im] amplitudes");
            Amplitudes a(2);
            for (std::size_t c = 0; c < 2; ++c) {
                if (!s[c].is_array() || s[c].size() != 2 || !s[c][0].is_number() || !s[c][1].is_number()) {
                    fail(where, "expected two [re, im] amplitudes");
                }
                a[static_cast<Eigen::Index>(c)] = {s[c][0].get<double>(), s[c][1].get<double>()};
            }
            if (std::abs(a.norm() - 1.0) > kStateTolerance) fail(where, "state is not normalized");
            list.push_back(a);
        }
        out = std::move(list);
    } else {
        fail(key + ".kind", "expected one of plus, random, explicit; got '" + kind + "'");
    }
    r.finish();
    return out;
}

std::vector<int> k_list(Reader& r) {
    std::vector<int> ks = r.int_list("k_list", 1, 7);
    check_unique_sorted(ks, r.path("k_list"));
    return ks;
}

Fig1bParams fig1b(Reader& r) {
    Fig1bParams p;
    p.a_size = static_cast<int>(r.integer("a_size", 1, 12));
    p.b_size = static_cast<int>(r.integer("b_size", 0, 40));
    p.k_list = k_list(r);
    const bool grid = r.has("epsilon_grid");
    const bool count = r.has("n_epsilon");
    if (grid == count) fail(r.path("epsilon_grid"), "give exactly one of epsilon_grid or n_epsilon");
    if (grid) {
        p.epsilon_grid = r.number_list("epsilon_grid");
        for (const double e : p.epsilon_grid) {
            if (!(e >= 0.0 && e <= 1.0)) fail(r.path("epsilon_grid"), "entries must lie in [0, 1]");
        }
    } else {
        const auto n = r.integer("n_epsilon", 2, 100000);
        for (std::int64_t i = 0; i < n; ++i) p.epsilon_grid.push_back(static_cast<double>(i) / static_cast<double>(n - 1));
    }
    return p;
}

std::vector<int> b_sizes(Reader& r) {
    std::vector<int> b = r.int_list("b_sizes", 0, 64);
    check_unique_sorted(b, r.path("b_sizes"));
    return b;
}

DynamicsParams dynamics(Reader& r) {
    DynamicsParams p;
    p.J = r.angle("J");
    p.g = r.angle("g");
    p.h = r.angle("h");
    p.s_size = static_cast<int>(r.integer("s_size", 0, 16));
    p.a_size = static_cast<int>(r.integer("a_size", 1, 16));
    p.b_sizes = b_sizes(r);
    p.t_max = static_cast<int>(r.integer("t_max", 0, 100000));
    p.k_list = k_list(r);
    p.n_realizations = static_cast<int>(r.integer_or("n_realizations", 1, 1, kBig));
    if (r.has("rho_s")) p.rho_s = rho_spec(r.at("rho_s"), r.path("rho_s"), p.s_size);
    if (r.has("e_states")) p.e_states = e_state_spec(r.at("e_states"), r.path("e_states"));
    for (const int b : p.b_sizes) {
        if (p.a_size + b < p.s_size) fail(r.path("b_sizes"), "chain a_size + b_size is shorter than s_size");
        if (const auto* list = std::get_if<std::vector<Amplitudes>>(&p.e_states)) {
            if (static_cast<int>(list->size()) != p.a_size + b - p.s_size) {
                fail(r.path("e_states"), "explicit list length must equal a_size + b_size - s_size");
            }
        }
    }
    if (std::holds_alternative<std::vector<Amplitudes>>(p.e_states) && p.b_sizes.size() > 1) {
        fail(r.path("e_states"), "explicit states require a single b_size");
    }
    return p;
}

SelfDualParams selfdual(Reader& r) {
    SelfDualParams p;
    p.g = r.angle("g");
    if (is_pi_over_8_multiple(p.g)) fail(r.path("g"), "must not be a multiple of pi/8");
    p.s_size = static_cast<int>(r.integer("s_size", 0, 16));
    p.a_size = static_cast<int>(r.integer("a_size", 1, 16));
    p.b_sizes = b_sizes(r);
    p.t_max = static_cast<int>(r.integer("t_max", 0, 100000));
    p.k_list = k_list(r);
    if (r.has("rho_s")) p.rho_s = rho_spec(r.at("rho_s"), r.path("rho_s"), p.s_size);
    if (r.has("e_states") && !std::holds_alternative<PlusStates>(e_state_spec(r.at("e_states"), r.path("e_states")))) {
        fail(r.path("e_states"), "the self-dual run is solvable only for |+> states on E");
    }
    for (const int b : p.b_sizes) {
        if (p.a_size + b < p.s_size) fail(r.path("b_sizes"), "chain a_size + b_size is shorter than s_size");
    }
    return p;
}

ScroogeParams scrooge(Reader& r) {
    ScroogeParams p;
    p.s_size = static_cast<int>(r.integer("s_size", 0, 12));
    p.a_size = static_cast<int>(r.integer("a_size", 1, 12));
    p.k_list = k_list(r);
    p.n_samples = static_cast<std::size_t>(r.integer("n_samples", 2, std::numeric_limits<std::int64_t>::max()));
    if (r.has("rho0")) p.rho0 = rho_spec(r.at("rho0"), r.path("rho0"), p.s_size);
    return p;
}

GhseParams ghse(Reader& r) {
    GhseParams p;
    p.rank_dim = static_cast<std::size_t>(r.integer("rank_dim", 1, 1 << 20));
    p.a_size = static_cast<int>(r.integer("a_size", 1, 12));
    p.k_list = k_list(r);
    p.n_samples = static_cast<std::size_t>(r.integer("n_samples", 2, std::numeric_limits<std::int64_t>::max()));
    return p;
}

McRefParams mc_ref(Reader& r) {
    McRefParams p;
    p.a_size = static_cast<int>(r.integer("a_size", 1, 12));
    p.b_size = static_cast<int>(r.integer("b_size", 0, 14));
    p.k_list = k_list(r);
    p.n_unitaries = static_cast<std::size_t>(r.integer("n_unitaries", 2, kBig));
    Reader s(r.at("spectrum"), r.path("spectrum"));
    const std::string kind = s.string("kind");
    const std::int64_t d = std::int64_t{1} << (p.a_size + p.b_size);
    if (kind == "pure") {
        p.eigenvalues = {1.0};
    } else if (kind == "flat") {
        const auto rank = s.integer("rank", 1, d);
        p.eigenvalues.assign(static_cast<std::size_t>(rank), 1.0 / static_cast<double>(rank));
    } else if (kind == "explicit") {
        p.eigenvalues = s.number_list("eigenvalues");
        if (static_cast<std::int64_t>(p.eigenvalues.size()) > d) fail(s.path("eigenvalues"), "longer than 2^(a_size + b_size)");
        try {
            (void)Spectrum::from_eigenvalues(p.eigenvalues);
        } catch (const std::invalid_argument& e) {
            fail(s.path("eigenvalues"), e.what());
        }
    } else {
        fail(s.path("kind"), "expected one of pure, flat, explicit; got '" + kind + "'");
    }
    s.finish();
    return p;
}

ConcentrationParams concentration(Reader& r) {
    ConcentrationParams p;
    const json& dims = r.at("dims");
    if (!dims.is_array() || dims.empty()) fail(r.path("dims"), "expected a non-empty array of powers of two");
    p.a_size = static_cast<int>(r.integer_or("a_size", 1, 1, 12));
    p.k = static_cast<int>(r.integer_or("k", 2, 1, 7));
    for (std::size_t i = 0; i < dims.size(); ++i) {
        const std::string where = r.path("dims") + "[" + std::to_string(i) + "]";
        const auto v = static_cast<std::uint64_t>(Reader::integer_value(dims[i], where, 2, std::int64_t{1} << 40));
        if ((v & (v - 1)) != 0) fail(where, "dimension must be a power of two");
        if (v < (std::uint64_t{2} << p.a_size)) fail(where, "dimension must exceed 2^a_size");
        if (!p.dims.empty() && v <= p.dims.back()) fail(r.path("dims"), "dimensions must be strictly increasing");
        p.dims.push_back(v);
    }
    p.n_samples = static_cast<std::size_t>(r.integer("n_samples", 2, kBig));
    return p;
}

}  // namespace

double parse_angle(const json& value, const std::string& key) {
    if (value.is_number()) return value.get<double>();
    if (!value.is_string()) fail(key, "expected a number or an angle string such as \"pi/4\"");
    static const std::regex pattern(R"(^\s*(-?)\s*(?:([0-9]*\.?[0-9]+)\s*\*\s*)?pi\s*(?:/\s*([0-9]*\.?[0-9]+))?\s*$)");
    std::smatch m;
    const std::string s = value.get<std::string>();
    if (!std::regex_match(s, m, pattern)) fail(key, "cannot parse angle '" + s + "'");
    double x = std::numbers::pi;
    if (m[2].matched) x *= std::stod(m[2].str());
    if (m[3].matched) {
        const double den = std::stod(m[3].str());
        if (den == 0.0) fail(key, "division by zero in angle '" + s + "'");
        x /= den;
    }
    return m[1].length() > 0 ? -x : x;
}

ExperimentConfig parse_config(const json& doc, std::string_view experiment) {
    Reader r(doc, "");
    ExperimentConfig c;
    if (r.has("experiment")) {
        c.experiment = r.string("experiment");
        if (!experiment.empty() && c.experiment != experiment) {
            fail("experiment", "config names '" + c.experiment + "' but '" + std::string(experiment) + "' was requested");
        }
    } else {
        if (experiment.empty()) fail("experiment", "required key is missing");
        c.experiment = experiment;
    }
    if (std::find(std::begin(kExperiments), std::end(kExperiments), c.experiment) == std::end(kExperiments)) {
        fail("experiment", "unknown experiment '" + c.experiment + "'");
    }
    if (r.has("master_seed")) {
        const json& s = doc.at("master_seed");
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
            fail("master_seed", "expected an unsigned 64-bit integer");
        }
        c.master_seed = s.get<std::uint64_t>();
    }
    c.threads = static_cast<int>(r.integer_or("threads", 1, 1, 1024));
    if (r.has("output_dir")) c.output_dir = r.string("output_dir");

    if (c.experiment == "fig1b") c.params = fig1b(r);
    else if (c.experiment == "dynamics") c.params = dynamics(r);
    else if (c.experiment == "selfdual") c.params = selfdual(r);
    else if (c.experiment == "scrooge_check") c.params = scrooge(r);
    else if (c.experiment == "ghse_check") c.params = ghse(r);
    else if (c.experiment == "mc_ref_check") c.params = mc_ref(r);
    else c.params = concentration(r);
    r.finish();
    c.source = doc;
    c.source["experiment"] = c.experiment;
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::string_view experiment) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
    }
    return parse_config(doc, experiment);
}

}  // namespace deepmix::harness
