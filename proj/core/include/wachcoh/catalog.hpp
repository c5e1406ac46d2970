#pragma once

#include <string>
#include <vector>

#include "wachcoh/wach.hpp"

namespace wachcoh {

struct CatalogEntry {
    std::string name;
    std::string description;
};

/* Built-in module catalog: trivial, unramified(1+p), cyclotomic twists
 * tate_r for r in [-3, 3], direct sums, a tensor square, and one nonsplit
 * extension constructed from a degree-1 cohomology class. */
const std::vector<CatalogEntry>& catalog_list();

/* Construct the named module at the requested parameters.  Throws
 * schema_error for unknown names. */
WachModuleA catalog_module(const std::string& name, const OFRingPtr& ring, unsigned mu_prec);

}  // namespace wachcoh
