#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "moi/mathml.hpp"

namespace moi {

// Canonical string form of an expression tree and the identity under which
// occurrences are counted and merged. Grammar:
//
//     leaf       ->  tag ":" content        (token and empty-leaf elements)
//     inner      ->  tag "(" node,node,... ")"
//
// An <mo> marked invisible-times or function-application serializes as the
// bare token `ivt` / `fa`. In canonical keys the characters ( ) , : \ inside
// leaf content carry a backslash prefix, and an unmarked <mo> whose entire
// content is literally "ivt" or "fa" gets a leading backslash; this keeps the
// mapping bijective and is part of the on-disk index format. display mode
// drops the backslashes and is for human output only.
using MoiKey = std::string;

std::string serialize(const MathNode& node);
std::string serialize(const MathTree& tree);

std::string display_key(const MathNode& node);
std::string display_key(const MathTree& tree);

// Canonical key -> display form.
std::string display_from_key(const MoiKey& key);

// Strict inverse of serialize: rejects malformed or non-canonical input with
// DecodeError, so that serialize(deserialize(k)) == k for every accepted k.
MathNode deserialize(std::string_view key);

// Maximum node count on any root-to-leaf path; a lone node has complexity 1.
uint32_t complexity(const MathNode& node);
uint32_t complexity(const MathTree& tree);

struct MoiOccurrence {
    MoiKey key;
    uint32_t complexity = 0;

    bool operator==(const MoiOccurrence&) const = default;
};

bool contains_identifier(const MathNode& node);

// Every subtree (the whole expression included) holding at least one <mi>,
// in pre-order, with multiplicity.
std::vector<MoiOccurrence> enumerate_mois(const MathNode& root);
std::vector<MoiOccurrence> enumerate_mois(const MathTree& tree);

}  // namespace moi
