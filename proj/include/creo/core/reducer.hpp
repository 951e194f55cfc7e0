#pragma once

#include "creo/core/event.hpp"
#include "creo/core/types.hpp"

namespace creo {

// Builds the initial decision state from a session's root event.
DecisionState root_state(const EditEvent& root);

// Pure state transition for one non-root event. Deterministic: everything the
// tool needs (strokes, generated diffs, seeds) is in the event.
DecisionState apply_event(const DecisionState& parent, const EditEvent& event);

}  // namespace creo
