#include "covpovm/group.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "covpovm/error.hpp"

namespace covpovm {

namespace {

std::string elem_name(const FiniteGroup& g, int a) {
  if (!g.labels.empty()) return g.labels[a] + " (#" + std::to_string(a) + ")";
  return "#" + std::to_string(a);
}

}  // namespace

bool Subgroup::contains(int g) const {
  return std::binary_search(members.begin(), members.end(), g);
}

GroupPtr validate_group(std::vector<std::vector<int>> table,
                        std::vector<std::string> labels) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw std::invalid_argument("group table is empty");
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(table[a].size()) != n)
      throw std::invalid_argument("group table is not square at row " +
                                  std::to_string(a));
    for (int b = 0; b < n; ++b)
      if (table[a][b] < 0 || table[a][b] >= n)
        throw std::invalid_argument("group table entry out of range at (" +
                                    std::to_string(a) + ", " +
                                    std::to_string(b) + ")");
  }
  if (!labels.empty() && static_cast<int>(labels.size()) != n)
    throw std::invalid_argument("label count does not match group order");

  auto group = std::make_shared<FiniteGroup>();
  group->order = n;
  group->mul = std::move(table);
  group->labels = std::move(labels);

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (group->mul[group->mul[a][b]][c] != group->mul[a][group->mul[b][c]])
          throw Error(ErrorCode::NotAssociative,
                      "(" + elem_name(*group, a) + " * " + elem_name(*group, b) +
                          ") * " + elem_name(*group, c) +
                          " differs from the right-associated product");

  int identity = -1;
  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      ok = group->mul[e][a] == a && group->mul[a][e] == a;
    if (ok) {
      identity = e;
      break;
    }
  }
  if (identity < 0)
    throw Error(ErrorCode::NoIdentity, "no two-sided identity element exists");
  group->identity = identity;

  group->inv.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (group->mul[a][b] == identity && group->mul[b][a] == identity) {
        group->inv[a] = b;
        break;
      }
    }
    if (group->inv[a] < 0)
      throw Error(ErrorCode::NoInverse,
                  "element " + elem_name(*group, a) + " has no two-sided inverse");
  }
  return group;
}

GroupPtr cyclic_group(int n) {
  if (n < 1) throw std::invalid_argument("cyclic group order must be >= 1");
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) table[a][b] = (a + b) % n;
  return validate_group(std::move(table));
}

GroupPtr build_product_group(const GroupPtr& g1, const GroupPtr& g2) {
  const int n1 = g1->order;
  const int n2 = g2->order;
  const int n = n1 * n2;
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int a1 = 0; a1 < n1; ++a1)
    for (int a2 = 0; a2 < n2; ++a2)
      for (int b1 = 0; b1 < n1; ++b1)
        for (int b2 = 0; b2 < n2; ++b2)
          table[a1 * n2 + a2][b1 * n2 + b2] =
              g1->mul[a1][b1] * n2 + g2->mul[a2][b2];

  std::vector<std::string> labels;
  if (!g1->labels.empty() || !g2->labels.empty()) {
    labels.reserve(n);
    for (int a1 = 0; a1 < n1; ++a1)
      for (int a2 = 0; a2 < n2; ++a2) {
        const std::string l1 =
            g1->labels.empty() ? std::to_string(a1) : g1->labels[a1];
        const std::string l2 =
            g2->labels.empty() ? std::to_string(a2) : g2->labels[a2];
        labels.push_back("(" + l1 + "," + l2 + ")");
      }
  }
  return validate_group(std::move(table), std::move(labels));
}

Subgroup make_subgroup(GroupPtr parent, std::vector<int> members) {
  if (!parent) throw std::invalid_argument("subgroup needs a parent group");
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  if (members.empty())
    throw Error(ErrorCode::NotASubgroup, "member list is empty");
  for (int m : members)
    if (m < 0 || m >= parent->order)
      throw Error(ErrorCode::NotASubgroup,
                  "member index " + std::to_string(m) + " is out of range");

  Subgroup sub{std::move(parent), std::move(members)};
  if (!sub.contains(sub.parent->identity))
    throw Error(ErrorCode::NotASubgroup, "identity is missing");
  for (int a : sub.members) {
    if (!sub.contains(sub.parent->inverse(a)))
      throw Error(ErrorCode::NotASubgroup,
                  "inverse of " + elem_name(*sub.parent, a) + " is missing");
    for (int b : sub.members)
      if (!sub.contains(sub.parent->op(a, b)))
        throw Error(ErrorCode::NotASubgroup,
                    "product " + elem_name(*sub.parent, a) + " * " +
                        elem_name(*sub.parent, b) + " escapes the member set");
  }
  return sub;
}

Subgroup trivial_subgroup(GroupPtr parent) {
  const int e = parent->identity;
  return make_subgroup(std::move(parent), {e});
}

Subgroup full_subgroup(GroupPtr parent) {
  std::vector<int> all(parent->order);
  for (int i = 0; i < parent->order; ++i) all[i] = i;
  return make_subgroup(std::move(parent), std::move(all));
}

CosetSpace left_cosets(const GroupPtr& group, const Subgroup& sub) {
  if (sub.parent.get() != group.get() && sub.parent->order != group->order)
    throw Error(ErrorCode::DimensionMismatch,
                "subgroup belongs to a different group");
  const int n = group->order;
  CosetSpace cosets;
  cosets.subgroup = sub;
  cosets.coset_of.assign(n, -1);
  for (int g = 0; g < n; ++g) {
    if (cosets.coset_of[g] >= 0) continue;
    const int id = cosets.count();
    cosets.representatives.push_back(g);
    for (int h : sub.members) cosets.coset_of[group->op(g, h)] = id;
  }
  return cosets;
}

GroupPtr subgroup_as_group(const Subgroup& sub) {
  const int n = sub.size();
  std::vector<int> local(sub.parent->order, -1);
  for (int i = 0; i < n; ++i) local[sub.members[i]] = i;
  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      table[i][j] = local[sub.parent->op(sub.members[i], sub.members[j])];
  std::vector<std::string> labels;
  if (!sub.parent->labels.empty()) {
    labels.reserve(n);
    for (int m : sub.members) labels.push_back(sub.parent->labels[m]);
  }
  return validate_group(std::move(table), std::move(labels));
}

}  // namespace covpovm
