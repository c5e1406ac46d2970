#include "wachcoh/module_io.hpp"

#include <fstream>

namespace wachcoh {

namespace {

ordered_json series_coeffs_A(const AFSeries& s) {
    ordered_json arr = ordered_json::array();
    for (unsigned j = 0; j < s.mu_prec(); ++j) arr.push_back(std::to_string(s.coeff(j).coords()[0]));
    return arr;
}

ordered_json series_coeffs_S(const SSeries& s) {
    ordered_json arr = ordered_json::array();
    for (unsigned j = 0; j < s.mu0_prec(); ++j) arr.push_back(std::to_string(s.coeff(j).coords()[0]));
    return arr;
}

uint64_t parse_coeff(const ordered_json& v, const char* where) {
    if (!v.is_string()) throw schema_error(std::string("coefficient at ") + where + " must be a decimal string");
    const std::string& s = v.get_ref<const std::string&>();
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw schema_error(std::string("coefficient at ") + where + " is not a nonnegative decimal: '" + s + "'");
    try {
        return std::stoull(s);
    } catch (const std::exception&) {
        throw schema_error(std::string("coefficient at ") + where + " out of range: '" + s + "'");
    }
}

template <typename SeriesT>
ordered_json matrix_json(const std::vector<std::vector<SeriesT>>& m,
                         ordered_json (*conv)(const SeriesT&)) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : m) {
        ordered_json r = ordered_json::array();
        for (const auto& e : row) r.push_back(conv(e));
        rows.push_back(std::move(r));
    }
    return rows;
}

ordered_json expected_json(const ExpectedGalois& e) {
    ordered_json j = ordered_json::object();
    if (e.h0_dim) j["h0_dim"] = *e.h0_dim;
    if (e.h1f_dim) j["h1f_dim"] = *e.h1f_dim;
    if (e.dcris_jumps) j["dcris_jumps"] = *e.dcris_jumps;
    return j;
}

std::optional<ExpectedGalois> expected_from_json(const ordered_json& j) {
    if (!j.contains("expected_galois")) return std::nullopt;
    const auto& e = j.at("expected_galois");
    ExpectedGalois out;
    if (e.contains("h0_dim")) out.h0_dim = e.at("h0_dim").get<unsigned>();
    if (e.contains("h1f_dim")) out.h1f_dim = e.at("h1f_dim").get<unsigned>();
    if (e.contains("dcris_jumps")) out.dcris_jumps = e.at("dcris_jumps").get<std::vector<int>>();
    return out;
}

void common_header(ordered_json& j, uint64_t p, unsigned f, unsigned prec_p, unsigned prec_mu,
                   const char* ring_tag, unsigned rank, unsigned h, const std::string& label) {
    j["format_version"] = 1;
    j["p"] = p;
    j["f"] = f;
    j["prec_p"] = prec_p;
    j["prec_mu"] = prec_mu;
    j["chi_gamma"] = p + 1;
    j["primitive_root"] = primitive_root(p);
    j["ring"] = ring_tag;
    j["rank"] = rank;
    j["h"] = h;
    j["label"] = label;
}

void check_header(const ordered_json& j) {
    for (const char* key : {"format_version", "p", "f", "prec_p", "prec_mu", "ring", "rank", "h", "label"})
        if (!j.contains(key)) throw schema_error(std::string("module file: missing field '") + key + "'");
    if (j.at("format_version").get<int>() != 1) throw schema_error("module file: unsupported format_version");
    if (j.at("f").get<unsigned>() != 1)
        throw schema_error("module file: only f = 1 is supported in the on-disk format");
    uint64_t p = j.at("p").get<uint64_t>();
    if (j.contains("chi_gamma") && j.at("chi_gamma").get<uint64_t>() != p + 1)
        throw schema_error("module file: chi_gamma must be 1 + p");
    if (j.contains("primitive_root") && j.at("primitive_root").get<uint64_t>() != primitive_root(p))
        throw schema_error("module file: primitive_root must be the smallest one");
}

template <typename SeriesT, typename MakeSeries>
std::vector<std::vector<SeriesT>> matrix_from_json(const ordered_json& arr, unsigned rank, unsigned len,
                                                   const char* name, MakeSeries make) {
    if (!arr.is_array() || arr.size() != rank)
        throw schema_error(std::string("module file: ") + name + " must be a rank x rank array");
    std::vector<std::vector<SeriesT>> m;
    for (unsigned i = 0; i < rank; ++i) {
        const auto& row = arr.at(i);
        if (!row.is_array() || row.size() != rank)
            throw schema_error(std::string("module file: ") + name + "[" + std::to_string(i) +
                               "] must have length rank");
        std::vector<SeriesT> r;
        for (unsigned jx = 0; jx < rank; ++jx) {
            const auto& entry = row.at(jx);
            if (!entry.is_array() || entry.size() != len)
                throw schema_error(std::string("module file: ") + name + "[" + std::to_string(i) + "][" +
                                   std::to_string(jx) + "] must list prec_mu coefficients");
            std::vector<uint64_t> c;
            c.reserve(len);
            std::string where = std::string(name) + "[" + std::to_string(i) + "][" + std::to_string(jx) + "]";
            for (unsigned t = 0; t < len; ++t) c.push_back(parse_coeff(entry.at(t), where.c_str()));
            r.push_back(make(std::move(c)));
        }
        m.push_back(std::move(r));
    }
    return m;
}

}  // namespace

ordered_json module_to_json(const WachModuleA& m) {
    if (m.ring->f() != 1) throw schema_error("module_to_json: only f = 1 serializes");
    ordered_json j;
    common_header(j, m.p(), 1, m.prec_p(), m.mu_prec, "A", m.rank, m.h, m.label);
    j["phi_num"] = matrix_json<AFSeries>(m.phi_num, series_coeffs_A);
    j["g_gamma"] = matrix_json<AFSeries>(m.g_gamma, series_coeffs_A);
    j["g_tor"] = matrix_json<AFSeries>(m.g_tor, series_coeffs_A);
    if (m.expected) j["expected_galois"] = expected_json(*m.expected);
    return j;
}

ordered_json module_to_json(const WachModuleS& m) {
    if (m.ring->f() != 1) throw schema_error("module_to_json: only f = 1 serializes");
    ordered_json j;
    common_header(j, m.p(), 1, m.prec_p(), m.mu0_prec, "S", m.rank, m.h, m.label);
    j["phi_num"] = matrix_json<SSeries>(m.phi_num, series_coeffs_S);
    j["g_gamma"] = matrix_json<SSeries>(m.g_gamma, series_coeffs_S);
    if (m.expected) j["expected_galois"] = expected_json(*m.expected);
    return j;
}

std::string canonical_dump(const ordered_json& j) { return j.dump(2) + "\n"; }

AnyModule module_from_json(const ordered_json& j) {
    check_header(j);
    uint64_t p = j.at("p").get<uint64_t>();
    unsigned prec_p = j.at("prec_p").get<unsigned>();
    unsigned len = j.at("prec_mu").get<unsigned>();
    unsigned rank = j.at("rank").get<unsigned>();
    unsigned h = j.at("h").get<unsigned>();
    std::string tag = j.at("ring").get<std::string>();
    OFRingPtr ring = OFRing::make(p, 1, prec_p);
    uint64_t mod = ring->modulus();
    auto make_of = [&](std::vector<uint64_t> c) {
        std::vector<OFElem> coeffs;
        coeffs.reserve(c.size());
        for (uint64_t v : c) coeffs.push_back(OFElem(ring, {v % mod}));
        return coeffs;
    };
    if (tag == "A") {
        if (!j.contains("phi_num") || !j.contains("g_gamma") || !j.contains("g_tor"))
            throw schema_error("module file: ring A needs phi_num, g_gamma and g_tor");
        WachModuleA m;
        m.ring = ring;
        m.mu_prec = len;
        m.rank = rank;
        m.h = h;
        m.label = j.at("label").get<std::string>();
        auto mk = [&](std::vector<uint64_t> c) { return AFSeries(ring, make_of(std::move(c))); };
        m.phi_num = matrix_from_json<AFSeries>(j.at("phi_num"), rank, len, "phi_num", mk);
        m.g_gamma = matrix_from_json<AFSeries>(j.at("g_gamma"), rank, len, "g_gamma", mk);
        m.g_tor = matrix_from_json<AFSeries>(j.at("g_tor"), rank, len, "g_tor", mk);
        m.expected = expected_from_json(j);
        return m;
    }
    if (tag == "S") {
        if (j.contains("g_tor")) throw schema_error("module file: ring S must not carry g_tor");
        if (!j.contains("phi_num") || !j.contains("g_gamma"))
            throw schema_error("module file: ring S needs phi_num and g_gamma");
        WachModuleS m;
        m.ring = ring;
        m.mu0_prec = len;
        m.rank = rank;
        m.h = h;
        m.label = j.at("label").get<std::string>();
        auto mk = [&](std::vector<uint64_t> c) { return SSeries(ring, make_of(std::move(c))); };
        m.phi_num = matrix_from_json<SSeries>(j.at("phi_num"), rank, len, "phi_num", mk);
        m.g_gamma = matrix_from_json<SSeries>(j.at("g_gamma"), rank, len, "g_gamma", mk);
        m.expected = expected_from_json(j);
        return m;
    }
    throw schema_error("module file: ring must be \"A\" or \"S\"");
}

void save_module_file(const std::string& path, const AnyModule& m) {
    ordered_json j = std::visit([](const auto& mm) { return module_to_json(mm); }, m);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot open '" + path + "' for writing");
    out << canonical_dump(j);
}

AnyModule load_module_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw schema_error("cannot open module file '" + path + "'");
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw schema_error(std::string("module file '") + path + "' is not valid JSON: " + e.what());
    }
    return module_from_json(j);
}

ordered_json cocycle_to_json(uint64_t p, unsigned prec_p, const Cocycle& c) {
    ordered_json j;
    j["format_version"] = 1;
    j["p"] = p;
    j["prec_p"] = prec_p;
    j["prec_mu"] = c.x.empty() ? 0 : c.x[0].mu_prec();
    ordered_json xs = ordered_json::array(), ys = ordered_json::array();
    for (const auto& s : c.x) xs.push_back(series_coeffs_A(s));
    for (const auto& s : c.y) ys.push_back(series_coeffs_A(s));
    j["x"] = xs;
    j["y"] = ys;
    return j;
}

Cocycle cocycle_from_json(const ordered_json& j, const OFRingPtr& ring, unsigned mu_prec) {
    for (const char* key : {"x", "y"})
        if (!j.contains(key)) throw schema_error(std::string("cocycle file: missing field '") + key + "'");
    if (j.contains("p") && j.at("p").get<uint64_t>() != ring->p())
        throw schema_error("cocycle file: p does not match the base module");
    Cocycle c;
    uint64_t mod = ring->modulus();
    for (const char* key : {"x", "y"}) {
        const auto& arr = j.at(key);
        if (!arr.is_array()) throw schema_error(std::string("cocycle file: '") + key + "' must be an array");
        for (size_t i = 0; i < arr.size(); ++i) {
            const auto& comp = arr.at(i);
            if (!comp.is_array()) throw schema_error("cocycle file: components must be coefficient arrays");
            std::vector<OFElem> coeffs;
            for (size_t t = 0; t < comp.size() && t < mu_prec; ++t)
                coeffs.push_back(OFElem(ring, {parse_coeff(comp.at(t), key) % mod}));
            while (coeffs.size() < mu_prec) coeffs.push_back(ring->zero());
            AFSeries s(ring, std::move(coeffs));
            (key[0] == 'x' ? c.x : c.y).push_back(std::move(s));
        }
    }
    if (c.x.size() != c.y.size()) throw schema_error("cocycle file: x and y must have the same rank");
    return c;
}

Cocycle load_cocycle_file(const std::string& path, const OFRingPtr& ring, unsigned mu_prec) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw schema_error("cannot open cocycle file '" + path + "'");
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw schema_error(std::string("cocycle file '") + path + "' is not valid JSON: " + e.what());
    }
    return cocycle_from_json(j, ring, mu_prec);
}

ordered_json to_json(const VerifyReport& r) {
    ordered_json j;
    ordered_json items = ordered_json::array();
    for (const auto& it : r.items) {
        ordered_json e;
        e["axiom"] = it.axiom;
        e["pass"] = it.pass;
        if (!it.detail.empty()) e["detail"] = it.detail;
        items.push_back(std::move(e));
    }
    j["axioms"] = items;
    if (r.det_exponent) j["det_exponent"] = *r.det_exponent;
    j["pass"] = r.pass();
    return j;
}

ordered_json to_json(const CohomologyReport& r) {
    ordered_json j;
    j["label"] = r.label;
    j["p"] = r.p;
    j["prec_p"] = r.prec_p;
    j["guard"] = r.guard;
    j["term_mu_prec"] = r.term_mu_prec;
    for (unsigned k = 0; k < 3; ++k) {
        ordered_json d;
        d["divisors"] = r.degree[k].divisors;
        d["rationalized_rank"] = r.degree[k].rationalized;
        d["torsion"] = r.degree[k].torsion;
        j["H" + std::to_string(k)] = std::move(d);
    }
    return j;
}

ordered_json to_json(const ComparisonReport& r) {
    ordered_json j;
    j["pass"] = r.pass;
    j["checks"] = r.checks;
    j["syntomic_ranks"] = r.syntomic_ranks;
    j["reference_ranks"] = r.reference_ranks;
    return j;
}

ordered_json to_json(const FilteredPhiModule& d) {
    ordered_json j;
    j["dim"] = d.dim;
    j["p_denominator_exp"] = d.denominator_exp;
    ordered_json rows = ordered_json::array();
    for (const auto& row : d.phi0) {
        ordered_json r = ordered_json::array();
        for (const auto& e : row) r.push_back(std::to_string(e.coords()[0]));
        rows.push_back(std::move(r));
    }
    j["phi0"] = rows;
    j["filtration_jumps"] = d.jumps;
    return j;
}

ordered_json to_json(const BKReport& r) {
    ordered_json j;
    j["H0_divisors"] = r.h0_divisors;
    j["H1_divisors"] = r.h1_divisors;
    j["H0_rank"] = r.h0_rank;
    j["H1_rank"] = r.h1_rank;
    return j;
}

}  // namespace wachcoh
