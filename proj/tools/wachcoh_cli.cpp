#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "wachcoh/catalog.hpp"
#include "wachcoh/module_io.hpp"
#include "wachcoh/nygaard.hpp"
#include "wachcoh/syntomic.hpp"

using namespace wachcoh;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitMalformed = 2;
constexpr int kExitPrecision = 3;

struct RingOpts {
    uint64_t p = 3;
    unsigned f = 1;
    unsigned prec_p = 8;
    unsigned prec_mu = 40;
};

void add_ring_opts(CLI::App* cmd, RingOpts& o) {
    cmd->add_option("--p", o.p, "odd prime p")->capture_default_str();
    cmd->add_option("--f", o.f, "residue degree f")->capture_default_str();
    cmd->add_option("--prec-p", o.prec_p, "p-adic precision N")->capture_default_str();
    cmd->add_option("--prec-mu", o.prec_mu, "series precision M")->capture_default_str();
}

void print(const ordered_json& j) { std::cout << canonical_dump(j); }

int run_catalog(const std::string& action, const std::string& name, const RingOpts& o) {
    if (action == "list") {
        ordered_json out = ordered_json::array();
        for (const auto& e : catalog_list()) {
            ordered_json row;
            row["name"] = e.name;
            row["description"] = e.description;
            out.push_back(std::move(row));
        }
        print(out);
        return kExitOk;
    }
    OFRingPtr ring = OFRing::make(o.p, o.f, o.prec_p);
    WachModuleA m = catalog_module(name, ring, o.prec_mu);
    print(module_to_json(m));
    return kExitOk;
}

int run_verify(const std::string& path) {
    AnyModule m = load_module_file(path);
    VerifyReport rep = std::visit([](const auto& mm) { return verify(mm); }, m);
    print(to_json(rep));
    return rep.pass() ? kExitOk : kExitVerification;
}

int run_special(const RingOpts& o) {
    OFRingPtr ring = OFRing::make(o.p, o.f, o.prec_p);
    SpecialElements se = special_elements(ring, o.prec_mu);
    ordered_json j;
    auto dump_series = [](const AFSeries& s) {
        ordered_json arr = ordered_json::array();
        for (unsigned t = 0; t < s.mu_prec(); ++t) arr.push_back(std::to_string(s.coeff(t).coords()[0]));
        return arr;
    };
    j["p"] = o.p;
    j["prec_p"] = o.prec_p;
    j["prec_mu"] = o.prec_mu;
    j["pq"] = dump_series(se.pq);
    j["mu0"] = dump_series(se.mu0);
    j["ptilde"] = dump_series(se.ptilde);

    ordered_json certs;
    certs["pq_is_p_mod_mu"] = se.pq.constant_term() == ring->from_int(static_cast<long long>(o.p));
    certs["ptilde_equals_mu0_plus_p"] =
        se.ptilde == se.mu0 + AFSeries::from_int(ring, static_cast<long long>(o.p), o.prec_mu);
    certs["mu0_over_mu_pow_is_unit"] = mu0_unit(ring, o.prec_mu).constant_term().is_unit();
    certs["ptilde_over_pq_is_unit_of_AF"] = is_unit_AF(ptilde_over_pq(ring, o.prec_mu));
    AFSeries u = phi_mu0_unit(ring, o.prec_mu);
    certs["phi_mu0_unit_is_unit_of_S"] = u.constant_term().is_unit() && fpx_average(u) == u;
    j["certificates"] = certs;
    print(j);
    for (const auto& [k, v] : certs.items())
        if (!v.get<bool>()) return kExitVerification;
    return kExitOk;
}

int run_fil(const std::string& path, int from, int to, unsigned guard) {
    AnyModule any = load_module_file(path);
    ordered_json j;
    if (std::holds_alternative<WachModuleA>(any)) {
        const WachModuleA& n = std::get<WachModuleA>(any);
        require_valid(n);
        auto gr = graded_dims(n, from, to, guard);
        ordered_json arr = ordered_json::array();
        for (auto [k, d] : gr) arr.push_back(ordered_json{{"k", k}, {"dim", d}});
        j["graded_dims"] = arr;
        // stability check: re-run after truncating down, since a file cannot
        // gain precision
        unsigned n2 = n.prec_p() > 3 ? n.prec_p() - 1 : n.prec_p();
        unsigned m2 = n.mu_prec > 10 ? n.mu_prec - 5 : n.mu_prec;
        WachModuleA low;
        low.ring = n.ring->at_prec(n2);
        low.mu_prec = m2;
        low.rank = n.rank;
        low.h = n.h;
        low.label = n.label;
        low.phi_num = amat_map(n.phi_num, [&](const AFSeries& s) { return s.at_prec(n2, m2); });
        low.g_gamma = amat_map(n.g_gamma, [&](const AFSeries& s) { return s.at_prec(n2, m2); });
        low.g_tor = amat_map(n.g_tor, [&](const AFSeries& s) { return s.at_prec(n2, m2); });
        auto gr2 = graded_dims(low, from, to, guard);
        bool stable = gr == gr2;
        j["stable_under_truncation"] = stable;
        print(j);
        return stable ? kExitOk : kExitVerification;
    }
    const WachModuleS& m = std::get<WachModuleS>(any);
    require_valid(m);
    auto gr = graded_dims(m, from, to, guard);
    ordered_json arr = ordered_json::array();
    for (auto [k, d] : gr) arr.push_back(ordered_json{{"k", k}, {"dim", d}});
    j["graded_dims"] = arr;
    print(j);
    return kExitOk;
}

int run_dcris(const std::string& path, unsigned guard) {
    AnyModule any = load_module_file(path);
    FilteredPhiModule d = std::visit([&](const auto& mm) { return dcris(mm, guard); }, any);
    ordered_json j;
    j["dcris"] = to_json(d);
    j["bloch_kato"] = to_json(bk_cohomology(build_bk(d), guard));
    print(j);
    return kExitOk;
}

int run_syntomic(const std::string& path, unsigned guard) {
    AnyModule any = load_module_file(path);
    CohomologyReport rep;
    if (std::holds_alternative<WachModuleA>(any))
        rep = cohomology(build_syntomic_A(std::get<WachModuleA>(any)), guard);
    else
        rep = cohomology(build_syntomic_S(std::get<WachModuleS>(any)), guard);
    print(to_json(rep));
    return kExitOk;
}

int run_descend(const std::string& path, const std::string& out) {
    AnyModule any = load_module_file(path);
    if (!std::holds_alternative<WachModuleA>(any)) throw schema_error("descend expects a ring-A module file");
    WachModuleS m = descend(std::get<WachModuleA>(any));
    save_module_file(out, m);
    std::cout << "wrote " << out << "\n";
    return kExitOk;
}

int run_ascend(const std::string& path, const std::string& out) {
    AnyModule any = load_module_file(path);
    if (!std::holds_alternative<WachModuleS>(any)) throw schema_error("ascend expects a ring-S module file");
    WachModuleA n = ascend(std::get<WachModuleS>(any));
    save_module_file(out, n);
    std::cout << "wrote " << out << "\n";
    return kExitOk;
}

int run_compare(const std::string& path, unsigned guard) {
    AnyModule any = load_module_file(path);
    ordered_json j;
    bool pass = true;
    if (std::holds_alternative<WachModuleA>(any)) {
        ComparisonReport rep = compare_A_to_BK(std::get<WachModuleA>(any), guard);
        j["A_vs_bloch_kato"] = to_json(rep);
        pass = rep.pass;
    } else {
        const WachModuleS& m = std::get<WachModuleS>(any);
        ComparisonReport rs = compare_S_to_A(m, guard);
        j["S_vs_A"] = to_json(rs);
        ComparisonReport ra = compare_A_to_BK(ascend(m), guard);
        j["A_vs_bloch_kato"] = to_json(ra);
        pass = rs.pass && ra.pass;
    }
    print(j);
    return pass ? kExitOk : kExitVerification;
}

int run_ext(const std::string& base_path, const std::string& cocycle_path, const std::string& out) {
    AnyModule any = load_module_file(base_path);
    if (!std::holds_alternative<WachModuleA>(any)) throw schema_error("ext expects a ring-A base module");
    const WachModuleA& n = std::get<WachModuleA>(any);
    Cocycle c = load_cocycle_file(cocycle_path, n.ring, n.mu_prec);
    if (c.x.size() != n.rank) throw schema_error("ext: cocycle rank does not match the base module");
    if (!is_cocycle(n, c.x, c.y)) {
        std::cerr << "ext: the pair is not a cocycle at precision\n";
        return kExitVerification;
    }
    WachModuleA e = extension_from_cocycle(n, c.x, c.y);
    VerifyReport rep = verify(e);
    if (!rep.pass()) {
        std::cerr << rep.summary();
        return kExitVerification;
    }
    save_module_file(out, e);
    std::cout << "wrote " << out << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact computer algebra for Wach modules and their syntomic cohomology"};
    app.require_subcommand(1);

    RingOpts opts;
    unsigned guard = 2;

    auto* cat = app.add_subcommand("catalog", "list built-in modules or print one");
    std::string cat_action, cat_name;
    cat->add_option("action", cat_action, "list | show")->required();
    cat->add_option("name", cat_name, "module name for 'show'");
    add_ring_opts(cat, opts);

    auto* ver = app.add_subcommand("verify", "check the module axioms of a file");
    std::string ver_path;
    ver->add_option("file", ver_path)->required();

    auto* spec = app.add_subcommand("special-elements", "print [p]_q, mu0, ptilde and their certificates");
    add_ring_opts(spec, opts);

    auto* fil = app.add_subcommand("fil", "graded filtration dimensions and a stability check");
    std::string fil_path;
    int fil_from = -2, fil_to = 3;
    fil->add_option("file", fil_path)->required();
    fil->add_option("--from", fil_from, "lowest degree")->capture_default_str();
    fil->add_option("--to", fil_to, "highest degree")->capture_default_str();
    fil->add_option("--guard", guard, "guard window")->capture_default_str();

    auto* dc = app.add_subcommand("dcris", "filtered phi-module and its Bloch-Kato cohomology");
    std::string dc_path;
    dc->add_option("file", dc_path)->required();
    dc->add_option("--guard", guard, "guard window")->capture_default_str();

    auto* syn = app.add_subcommand("syntomic", "cohomology of the syntomic complex");
    std::string syn_path;
    syn->add_option("file", syn_path)->required();
    syn->add_option("--guard", guard, "guard window")->capture_default_str();

    auto* desc = app.add_subcommand("descend", "descend a ring-A module to S");
    std::string desc_path, desc_out;
    desc->add_option("file", desc_path)->required();
    desc->add_option("-o,--output", desc_out)->required();

    auto* asc = app.add_subcommand("ascend", "ascend a ring-S module to A");
    std::string asc_path, asc_out;
    asc->add_option("file", asc_path)->required();
    asc->add_option("-o,--output", asc_out)->required();

    auto* cmp = app.add_subcommand("compare", "compare syntomic cohomology with the Bloch-Kato complex");
    std::string cmp_path;
    cmp->add_option("file", cmp_path)->required();
    cmp->add_option("--guard", guard, "guard window")->capture_default_str();

    auto* ext = app.add_subcommand("ext", "build the extension attached to a cocycle");
    std::string ext_base, ext_cocycle, ext_out;
    ext->add_option("base", ext_base)->required();
    ext->add_option("--cocycle", ext_cocycle)->required();
    ext->add_option("-o,--output", ext_out)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cat->parsed()) {
            if (cat_action != "list" && cat_action != "show")
                throw schema_error("catalog action must be 'list' or 'show'");
            if (cat_action == "show" && cat_name.empty()) throw schema_error("catalog show needs a name");
            return run_catalog(cat_action, cat_name, opts);
        }
        if (ver->parsed()) return run_verify(ver_path);
        if (spec->parsed()) return run_special(opts);
        if (fil->parsed()) return run_fil(fil_path, fil_from, fil_to, guard);
        if (dc->parsed()) return run_dcris(dc_path, guard);
        if (syn->parsed()) return run_syntomic(syn_path, guard);
        if (desc->parsed()) return run_descend(desc_path, desc_out);
        if (asc->parsed()) return run_ascend(asc_path, asc_out);
        if (cmp->parsed()) return run_compare(cmp_path, guard);
        if (ext->parsed()) return run_ext(ext_base, ext_cocycle, ext_out);
    } catch (const schema_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitMalformed;
    } catch (const precision_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPrecision;
    } catch (const axiom_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerification;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerification;
    }
    return kExitOk;
}
