#include "lfikit/swap.hpp"

#include <algorithm>

namespace lfikit {

bool snapshot_constraints_hold(const FiniteBooleanAlgebra& alg,
                               const Snapshot& s) {
  if (!alg.contains(s.truth) || !alg.contains(s.negation) ||
      !alg.contains(s.consistency))
    return false;
  return join(s.truth, s.negation) == alg.top() &&
         meet(meet(s.truth, s.negation), s.consistency) == alg.bottom();
}

std::vector<Snapshot> swap_domain(const FiniteBooleanAlgebra& alg) {
  // The constraints are bitwise: per atom the admissible coordinate patterns
  // are exactly (1,0,1), (1,1,0), (1,0,0), (0,1,1), (0,1,0). Enumerating one
  // pattern per atom yields the whole domain without scanning all 8^n
  // triples.
  static constexpr std::uint32_t kPatterns[5][3] = {
      {1, 0, 1}, {1, 1, 0}, {1, 0, 0}, {0, 1, 1}, {0, 1, 0}};
  const unsigned n = alg.atoms();
  std::vector<Snapshot> out;
  std::size_t count = 1;
  for (unsigned i = 0; i < n; ++i) count *= 5;
  out.reserve(count);
  std::vector<unsigned> choice(n, 0);
  for (std::size_t k = 0; k < count; ++k) {
    std::uint32_t b1 = 0, b2 = 0, b3 = 0;
    for (unsigned i = 0; i < n; ++i) {
      b1 |= kPatterns[choice[i]][0] << i;
      b2 |= kPatterns[choice[i]][1] << i;
      b3 |= kPatterns[choice[i]][2] << i;
    }
    out.push_back({alg.element(b1), alg.element(b2), alg.element(b3)});
    for (unsigned i = 0; i < n; ++i) {
      if (++choice[i] < 5) break;
      choice[i] = 0;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

BAElement bin_conn_apply(BinConn op, const BAElement& x, const BAElement& y) {
  switch (op) {
    case BinConn::And: return meet(x, y);
    case BinConn::Or: return join(x, y);
    case BinConn::Imp: return imp(x, y);
  }
  return x;
}

SwapNmatrix SwapNmatrix::full(const FiniteBooleanAlgebra& alg) {
  return SwapNmatrix(alg, swap_domain(alg), true);
}

SwapNmatrix SwapNmatrix::m5() {
  SwapNmatrix m = full(FiniteBooleanAlgebra::two());
  m.names_.resize(m.domain_.size());
  auto name = [&m](std::uint32_t a, std::uint32_t b, std::uint32_t c,
                   const char* n) {
    Snapshot s{m.algebra_.element(a), m.algebra_.element(b),
               m.algebra_.element(c)};
    m.names_[m.index_of(s)] = n;
  };
  name(1, 0, 1, "T");
  name(1, 1, 0, "t");
  name(1, 0, 0, "t0");
  name(0, 1, 1, "F");
  name(0, 1, 0, "f0");
  return m;
}

SwapNmatrix SwapNmatrix::restricted(const FiniteBooleanAlgebra& alg,
                                    const SwapRestriction& r) {
  for (const auto& s : r.domain)
    if (!snapshot_constraints_hold(alg, s))
      throw SwapError("domain element " + to_string(s) +
                      " violates the snapshot constraints");
  SwapNmatrix m(alg, r.domain, false);
  auto check_output = [&](const std::vector<std::size_t>& out,
                          const BAElement& wanted_first,
                          const std::string& where) {
    if (out.empty()) throw SwapError("empty multioperation output at " + where);
    for (std::size_t z : out) {
      if (z >= m.domain_.size())
        throw SwapError("output index escapes the domain at " + where);
      if (m.domain_[z].truth != wanted_first)
        throw SwapError("first-projection law violated at " + where);
    }
  };
  for (std::size_t x = 0; x < m.domain_.size(); ++x) {
    for (auto op : {UnConn::Neg, UnConn::Cons}) {
      auto it = r.unary.find({op, x});
      if (it == r.unary.end())
        throw SwapError("missing unary table entry");
      BAElement wanted = op == UnConn::Neg ? m.domain_[x].negation
                                           : m.domain_[x].consistency;
      check_output(it->second, wanted,
                   (op == UnConn::Neg ? std::string("~") : std::string("*")) +
                       to_string(m.domain_[x]));
      auto sorted = it->second;
      std::sort(sorted.begin(), sorted.end());
      m.unary_table_[{op, x}] = std::move(sorted);
    }
    for (std::size_t y = 0; y < m.domain_.size(); ++y) {
      for (auto op : {BinConn::And, BinConn::Or, BinConn::Imp}) {
        auto it = r.binary.find({op, {x, y}});
        if (it == r.binary.end())
          throw SwapError("missing binary table entry");
        BAElement wanted =
            bin_conn_apply(op, m.domain_[x].truth, m.domain_[y].truth);
        check_output(it->second, wanted,
                     to_string(m.domain_[x]) + " # " + to_string(m.domain_[y]));
        auto sorted = it->second;
        std::sort(sorted.begin(), sorted.end());
        m.binary_table_[{op, {x, y}}] = std::move(sorted);
      }
    }
  }
  bool any_designated = false;
  for (std::size_t i = 0; i < m.domain_.size(); ++i)
    any_designated |= m.designated(i);
  if (!any_designated) throw SwapError("designated set is empty");
  return m;
}

std::size_t SwapNmatrix::index_of(const Snapshot& s) const {
  auto idx = find(s);
  if (!idx) throw SwapError("snapshot " + to_string(s) + " not in domain");
  return *idx;
}

std::optional<std::size_t> SwapNmatrix::find(const Snapshot& s) const {
  auto it = std::lower_bound(domain_.begin(), domain_.end(), s);
  if (it != domain_.end() && *it == s)
    return static_cast<std::size_t>(it - domain_.begin());
  return std::nullopt;
}

std::vector<std::size_t> SwapNmatrix::designated_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < domain_.size(); ++i)
    if (designated(i)) out.push_back(i);
  return out;
}

const std::vector<std::size_t>& SwapNmatrix::binary(BinConn op, std::size_t x,
                                                    std::size_t y) const {
  if (!full_) {
    auto it = binary_table_.find({op, {x, y}});
    if (it == binary_table_.end()) throw SwapError("no table entry");
    return it->second;
  }
  auto key = std::make_pair(static_cast<int>(op), std::make_pair(x, y));
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  BAElement wanted = bin_conn_apply(op, domain_[x].truth, domain_[y].truth);
  std::vector<std::size_t> out;
  for (std::size_t z = 0; z < domain_.size(); ++z)
    if (domain_[z].truth == wanted) out.push_back(z);
  return memo_.emplace(key, std::move(out)).first->second;
}

const std::vector<std::size_t>& SwapNmatrix::unary(UnConn op,
                                                   std::size_t x) const {
  if (!full_) {
    auto it = unary_table_.find({op, x});
    if (it == unary_table_.end()) throw SwapError("no table entry");
    return it->second;
  }
  auto key = std::make_pair(static_cast<int>(op) + 8, std::make_pair(x, x));
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  BAElement wanted =
      op == UnConn::Neg ? domain_[x].negation : domain_[x].consistency;
  std::vector<std::size_t> out;
  for (std::size_t z = 0; z < domain_.size(); ++z)
    if (domain_[z].truth == wanted) out.push_back(z);
  return memo_.emplace(key, std::move(out)).first->second;
}

std::string SwapNmatrix::value_name(std::size_t i) const {
  if (i < names_.size() && !names_[i].empty()) return names_[i];
  return to_string(domain_[i]);
}

std::string to_string(const Snapshot& s) {
  return "(" + to_string(s.truth) + "," + to_string(s.negation) + "," +
         to_string(s.consistency) + ")";
}

}  // namespace lfikit
