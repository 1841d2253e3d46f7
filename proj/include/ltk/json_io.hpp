#ifndef LTK_JSON_IO_HPP
#define LTK_JSON_IO_HPP

// JSON encodings of models, SP-frames, witnesses and reduced rules.
//
// model:   {"agents": k,
//           "clusters": [{"worlds": [ids], "partitions": [[[ids]...] per agent],
//                         "next": [cluster indices]   (optional)}...],
//           "valuation": {"p1": [ids], ...}}
// A model without any "next" key is a linear chain in listed order.
// SP-frame: {"agents", "clusters": C_0..C_d, "sp": {"d", "tails": [[ids]], "top"}}.

#include <json.hpp>

#include "ltk/admissibility.hpp"
#include "ltk/charmodel.hpp"
#include "ltk/kripke.hpp"
#include "ltk/normal_form.hpp"
#include "ltk/oracle.hpp"

namespace ltk {

using json = nlohmann::ordered_json;

json to_json(const Frame& frame);
json to_json(const Model& model);
Model model_from_json(const json& j);

json to_json(const SpFrame& sp);
SpFrame sp_from_json(const json& j);

json to_json(const SearchBounds& b);
SearchBounds bounds_from_json(const json& j);
json to_json(const FrameBounds& b);

/// Theta indices are numbers when they fit in 64 bits, decimal strings otherwise.
json index_to_json(const BigCount& i);
BigCount index_from_json(const json& j);

json to_json(const ReducedRule& rr, const Witness& w, const SearchBounds& b);
Witness witness_from_json(const ReducedRule& rr, const json& j);

json to_json(const Countermodel& cm);
json to_json(const SliceModel& sm);

/// {"m", "k", "count", "thetas" (when count <= max_thetas),
///  "constrained_positions", "core", "free_positions"}
json nf_to_json(const ReducedRule& rr, std::size_t max_thetas = 4096);

}  // namespace ltk

#endif
