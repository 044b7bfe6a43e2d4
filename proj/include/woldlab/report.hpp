#pragma once

#include <json.hpp>

#include "woldlab/pairs.hpp"
#include "woldlab/spectral.hpp"

namespace woldlab {

using Json = nlohmann::ordered_json;

Json to_json(const BasisIndex& b);
/// [{lane, position, re, im}, ...] in index order.
Json to_json(const HVector& x);
Json to_json(const std::vector<HVector>& basis);
/// {verdict, witness, horizon, exact, note}
Json to_json(const Certificate& c);
Json to_json(const WoldResult& w);
Json to_json(const WanderingSpanResult& r);
Json to_json(const CertifiedSubspace& s);
Json to_json(const PairReport& r);
Json to_json(const Exhaustion& e);

Json to_json(const Arc& a);
Json to_json(const SpectralUnitary& u);
Json to_json(const MultiplicityProfile& p);
Json to_json(const SpectralDecision& d);
Json to_json(const BilateralCover& c);

/// {arcs: [{start, length}], atoms: [{angle, mult}]}; angles as numbers or
/// "p/q" strings.
SpectralUnitary spectral_from_json(const Json& j);
SpectralUnitary parse_spectral_file(const std::string& path);

}  // namespace woldlab
