#ifndef ENDSPACE_JSON_OUT_HPP
#define ENDSPACE_JSON_OUT_HPP

#include <string>
#include <vector>

#include "json.hpp"

#include "endspace/ends.hpp"
#include "endspace/quotient.hpp"
#include "endspace/tours.hpp"

namespace endspace {

// All serializers use ordered maps so that dumps are byte-deterministic.
using Json = nlohmann::ordered_json;

Json json_level(const QuotientLevel& lv);
Json json_bonding(const BondingMap& b);

// Alternating class and edge ids, starting and ending with a class.
Json json_walk(const MultiDigraph& g, const Walk& w);

Json json_info(const Source& s, std::size_t sample);
Json json_end_space(const EndSpace& es);
Json json_limit_edges(const EndSpace& es);
Json json_basic_open(const BasicOpen& bo);
Json json_necklace(const NecklacePrefix& p, const NecklaceVerdict& v);
Json json_rank(const RankResult& r);
Json json_euler_verdict(const EulerVerdict& v);
Json json_tour_thread(const std::vector<QuotientLevel>& levels,
                      const TourThread& t, const ThreadVerdict& v);
Json json_walk_thread(const std::vector<QuotientLevel>& levels,
                      const WalkThread& t, const ThreadVerdict& v);
Json json_system(const SystemReport& r);

} // namespace endspace

#endif
