#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "majkit/canon.hpp"
#include "majkit/horn.hpp"
#include "majkit/sequence.hpp"
#include "majkit/stoch.hpp"
#include "majkit/verdict.hpp"

namespace majkit {

// Repo-wide JSON wire formats. Rationals travel as "p/q" strings (lossless);
// all emitters order keys and sparse entries deterministically.

nlohmann::json seq_to_json(const MonotoneSeq& s);
MonotoneSeq seq_from_json(const nlohmann::json& j);

nlohmann::json mat_to_json(const RationalMatTrunc& m);
RationalMatTrunc mat_from_json(const nlohmann::json& j);

nlohmann::json sqrt_mat_to_json(const SignedSqrtMat& m);
SignedSqrtMat sqrt_mat_from_json(const nlohmann::json& j);

nlohmann::json verdict_to_json(const Verdict3& v, std::size_t horizon);

nlohmann::json horn_to_json(const HornWitness& w);
nlohmann::json canon_run_to_json(const CanonRun& run);

/// Dense CSV rendering; radical entries as signed decimals (export only).
std::string mat_to_csv(const RationalMatTrunc& m);
std::string sqrt_mat_to_csv(const SignedSqrtMat& m, int digits = 15);

}  // namespace majkit
