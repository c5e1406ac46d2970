#pragma once

#include <string>
#include <variant>

#include "json.hpp"
#include "wachcoh/nygaard.hpp"
#include "wachcoh/syntomic.hpp"
#include "wachcoh/wach.hpp"

namespace wachcoh {

using ordered_json = nlohmann::ordered_json;

/*
 * On-disk module format (format_version 1, f = 1 only): canonical key order,
 * decimal coefficient strings, matrices as rank x rank arrays of coefficient
 * arrays; ring tag "A" or "S" (g_tor absent over S).  Serialization is
 * byte-deterministic; load followed by canonical re-serialization reproduces
 * the bytes.
 */
ordered_json module_to_json(const WachModuleA& m);
ordered_json module_to_json(const WachModuleS& m);
std::string canonical_dump(const ordered_json& j);

using AnyModule = std::variant<WachModuleA, WachModuleS>;
AnyModule module_from_json(const ordered_json& j);

void save_module_file(const std::string& path, const AnyModule& m);
AnyModule load_module_file(const std::string& path);

/* cocycle files: the (x, y) pair of coefficient-string vectors */
ordered_json cocycle_to_json(uint64_t p, unsigned prec_p, const Cocycle& c);
Cocycle cocycle_from_json(const ordered_json& j, const OFRingPtr& ring, unsigned mu_prec);
Cocycle load_cocycle_file(const std::string& path, const OFRingPtr& ring, unsigned mu_prec);

/* deterministic reports */
ordered_json to_json(const VerifyReport& r);
ordered_json to_json(const CohomologyReport& r);
ordered_json to_json(const ComparisonReport& r);
ordered_json to_json(const FilteredPhiModule& d);
ordered_json to_json(const BKReport& r);

}  // namespace wachcoh
