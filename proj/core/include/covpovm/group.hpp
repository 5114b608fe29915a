#pragma once

#include <memory>
#include <string>
#include <vector>

namespace covpovm {

/// Finite group given by its multiplication table. Elements are the 0-based
/// row/column indices of the table; that indexing is fixed at construction and
/// every downstream ordering (representation matrices, coset enumeration,
/// report layout) follows it, which is what makes results reproducible.
struct FiniteGroup {
  int order = 0;
  std::vector<std::vector<int>> mul;  // mul[a][b] = index of a*b
  int identity = 0;
  std::vector<int> inv;  // inv[a] = index of a^{-1}
  std::vector<std::string> labels;  // optional display labels, empty or size `order`

  int op(int a, int b) const { return mul[a][b]; }
  int inverse(int a) const { return inv[a]; }
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

/// Checks the group axioms on a raw table (associativity, two-sided identity,
/// two-sided inverses) and fills in the identity/inverse caches. Throws
/// Error{NotAssociative, NoIdentity, NoInverse} naming the first violation.
GroupPtr validate_group(std::vector<std::vector<int>> table,
                        std::vector<std::string> labels = {});

/// Z_n with elements 0..n-1 under addition mod n.
GroupPtr cyclic_group(int n);

/// Direct product G1 x G2 with lexicographic element indexing
/// (a, b) -> a * |G2| + b.
GroupPtr build_product_group(const GroupPtr& g1, const GroupPtr& g2);

struct Subgroup {
  GroupPtr parent;
  std::vector<int> members;  // sorted, always contains the identity

  int size() const { return static_cast<int>(members.size()); }
  bool contains(int g) const;
};

/// Validates closure under multiplication and inverses; throws NotASubgroup.
Subgroup make_subgroup(GroupPtr parent, std::vector<int> members);

Subgroup trivial_subgroup(GroupPtr parent);
Subgroup full_subgroup(GroupPtr parent);

/// Left coset space G/H. Cosets are numbered in order of first appearance as
/// g runs over 0..|G|-1, so the representative of each coset is its minimal
/// element index.
struct CosetSpace {
  Subgroup subgroup;
  std::vector<int> representatives;  // one element index per coset
  std::vector<int> coset_of;         // length |G|: coset index of each element

  int count() const { return static_cast<int>(representatives.size()); }
};

CosetSpace left_cosets(const GroupPtr& group, const Subgroup& sub);

/// Re-indexes a subgroup as a standalone group; element i of the result is
/// members[i] of the parent (members sorted ascending).
GroupPtr subgroup_as_group(const Subgroup& sub);

}  // namespace covpovm
