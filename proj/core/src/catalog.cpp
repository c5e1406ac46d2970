#include "wachcoh/catalog.hpp"

#include "wachcoh/syntomic.hpp"

namespace wachcoh {

const std::vector<CatalogEntry>& catalog_list() {
    static const std::vector<CatalogEntry> entries = {
        {"trivial", "rank 1, phi = 1, trivial actions"},
        {"unramified", "rank 1 unramified character with phi = 1 + p"},
        {"tate_-3", "cyclotomic twist by -3"},
        {"tate_-2", "cyclotomic twist by -2"},
        {"tate_-1", "cyclotomic twist by -1"},
        {"tate_1", "cyclotomic twist by 1"},
        {"tate_2", "cyclotomic twist by 2"},
        {"tate_3", "cyclotomic twist by 3"},
        {"sum_tate1_tatem1", "direct sum of the twists by 1 and -1"},
        {"sum_trivial_tate1", "direct sum of the trivial module and the twist by 1"},
        {"tensor_tate1_tate1", "tensor square of the twist by 1"},
        {"ext_nonsplit", "nonsplit extension of the trivial module by the twist by 1"},
    };
    return entries;
}

namespace {

WachModuleA tate_entry(const OFRingPtr& ring, unsigned mu_prec, int r) {
    WachModuleA m = tate_twist(trivial_module(ring, mu_prec), r);
    m.label = "tate_" + std::to_string(r);
    ExpectedGalois e;
    e.h0_dim = r == 0 ? 1 : 0;
    e.h1f_dim = r > 0 ? 1 : (r == 0 ? 1 : 0);
    e.dcris_jumps = std::vector<int>{-r};
    m.expected = e;
    return m;
}

WachModuleA nonsplit_extension(const OFRingPtr& ring, unsigned mu_prec) {
    // take the first full-order degree-1 class of the twist by 1 and build
    // the attached rank-2 extension; built one coefficient high so the
    // result lands at the requested precision
    WachModuleA tp1 = tate_entry(ring, mu_prec + 1, 1);
    auto classes = h1_classes(tp1, 2);
    if (classes.empty()) throw error("catalog: no degree-1 class available for ext_nonsplit");
    const H1Class& cl = classes.front();
    WachModuleA base = tp1.truncated(std::min<unsigned>(cl.x[0].mu_prec(), mu_prec));
    std::vector<AFSeries> x, y;
    for (unsigned i = 0; i < base.rank; ++i) {
        x.push_back(cl.x[i].truncated(base.mu_prec));
        y.push_back(cl.y[i].truncated(base.mu_prec));
    }
    WachModuleA m = extension_from_cocycle(base, x, y);
    m.label = "ext_nonsplit";
    ExpectedGalois e;
    e.h0_dim = 0;
    e.h1f_dim = 1;
    e.dcris_jumps = std::vector<int>{-1, 0};
    m.expected = e;
    return m;
}

}  // namespace

WachModuleA catalog_module(const std::string& name, const OFRingPtr& ring, unsigned mu_prec) {
    if (name == "trivial") return trivial_module(ring, mu_prec);
    if (name == "unramified") {
        WachModuleA m = unramified_char(ring, mu_prec, ring->from_int(static_cast<long long>(ring->p()) + 1));
        m.label = "unramified";
        return m;
    }
    if (name.rfind("tate_", 0) == 0) {
        int r = 0;
        try {
            r = std::stoi(name.substr(5));
        } catch (const std::exception&) {
            throw schema_error("catalog: unknown module '" + name + "'");
        }
        if (r < -3 || r > 3 || r == 0) throw schema_error("catalog: twists range over tate_-3 .. tate_3");
        return tate_entry(ring, mu_prec, r);
    }
    if (name == "sum_tate1_tatem1") {
        WachModuleA m = direct_sum(tate_entry(ring, mu_prec, 1), tate_entry(ring, mu_prec, -1));
        m.label = "sum_tate1_tatem1";
        return m;
    }
    if (name == "sum_trivial_tate1") {
        WachModuleA m = direct_sum(trivial_module(ring, mu_prec), tate_entry(ring, mu_prec, 1));
        m.label = "sum_trivial_tate1";
        return m;
    }
    if (name == "tensor_tate1_tate1") {
        WachModuleA m = tensor(tate_entry(ring, mu_prec, 1), tate_entry(ring, mu_prec, 1));
        m.label = "tensor_tate1_tate1";
        ExpectedGalois e;
        e.h0_dim = 0;
        e.h1f_dim = 1;
        e.dcris_jumps = std::vector<int>{-2};
        m.expected = e;
        return m;
    }
    if (name == "ext_nonsplit") return nonsplit_extension(ring, mu_prec);
    throw schema_error("catalog: unknown module '" + name + "'");
}

}  // namespace wachcoh
