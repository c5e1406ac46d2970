#pragma once

#include "wachcoh/linalg.hpp"
#include "wachcoh/wach.hpp"

namespace wachcoh {

/*
 * Flattening of mu-truncated module vectors to Z/p^N coordinates.
 * Index order: component i, mu-power j, O_F-coordinate t |-> (i*M + j)*f + t.
 */
struct FlatteningA {
    OFRingPtr ring;
    unsigned rank = 0;
    unsigned mu_prec = 0;

    size_t dim() const { return static_cast<size_t>(rank) * mu_prec * ring->f(); }
    std::vector<uint64_t> flatten(const std::vector<AFSeries>& v) const;
    std::vector<AFSeries> unflatten(const std::vector<uint64_t>& x) const;
    std::vector<AFSeries> basis_vector(size_t idx) const;
    /* Matrix of a truncation-compatible Z_p-linear operator. */
    Mat op_matrix(unsigned out_mu_prec,
                  const std::function<std::vector<AFSeries>(const std::vector<AFSeries>&)>& op) const;
};

struct FlatteningS {
    OFRingPtr ring;
    unsigned rank = 0;
    unsigned mu0_prec = 0;

    size_t dim() const { return static_cast<size_t>(rank) * mu0_prec * ring->f(); }
    std::vector<uint64_t> flatten(const std::vector<SSeries>& v) const;
    std::vector<SSeries> unflatten(const std::vector<uint64_t>& x) const;
    std::vector<SSeries> basis_vector(size_t idx) const;
    Mat op_matrix(unsigned out_mu0_prec,
                  const std::function<std::vector<SSeries>(const std::vector<SSeries>&)>& op) const;
};

/*
 * Fil^k with phi-witness pairs: the solution module of
 *   D^{a} PhiNum phi(x) = D^{b} w,   a = max(0, -(k+h)), b = max(0, k+h),
 * (D = [p]_q over A, ptilde over S) inside flatten(x) + flatten(w).  The
 * x-parts generate Fil^k at precision; the w-parts witness phi(x)/D^k
 * without any truncated division.
 */
struct FilPairsA {
    int k = 0;
    FlatteningA fl;
    Mat gens;  // 2*dim() rows
    Mat x_part() const;
    Mat w_part() const;
};

struct FilPairsS {
    int k = 0;
    FlatteningS fl;
    Mat gens;
    Mat x_part() const;
    Mat w_part() const;
};

FilPairsA fil_pairs(const WachModuleA& n, int k, unsigned mu_prec);
FilPairsS fil_pairs(const WachModuleS& m, int k, unsigned mu0_prec);

/* Public filtration surface: generators spanning Fil^k at precision. */
struct FiltrationBasis {
    int k = 0;
    unsigned mu_prec = 0;
    std::vector<ModuleElement> generators;
};
FiltrationBasis fil_basis(const WachModuleA& n, int k);

/* dim gr^k for k in [kmin, kmax]: ranks of the images of Fil^k in the mod-mu
 * (mod-mu0) reduction, saturated at the guard window, then differenced. */
std::vector<std::pair<int, unsigned>> graded_dims(const WachModuleA& n, int kmin, int kmax,
                                                  unsigned guard = 2);
std::vector<std::pair<int, unsigned>> graded_dims(const WachModuleS& m, int kmin, int kmax,
                                                  unsigned guard = 2);

/*
 * FilteredPhiModule: D_cris data extracted from the mod-mu reduction.
 * phi = p^{-denominator_exp} * phi0 on O_F-coordinates; filtration jumps
 * with multiplicity; fil0_basis spans Fil^0 after saturation (columns in the
 * flattened O_F-coordinate space of dimension rank * f).
 */
struct FilteredPhiModule {
    OFRingPtr ring;
    unsigned dim = 0;
    unsigned denominator_exp = 0;
    std::vector<std::vector<OFElem>> phi0;
    std::vector<int> jumps;
    Mat fil0_basis;
};

FilteredPhiModule dcris(const WachModuleA& n, unsigned guard = 2);
FilteredPhiModule dcris(const WachModuleS& m, unsigned guard = 2);

}  // namespace wachcoh
