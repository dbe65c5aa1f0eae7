#include "propagator.hpp"

#include <algorithm>

namespace smtkc::detail {

Propagator::Propagator(const ClauseDb& db)
    : clauses_(db.clauses),
      num_original_(db.clauses.size()),
      watches_(2 * static_cast<std::size_t>(db.num_vars) + 2),
      value_(static_cast<std::size_t>(db.num_vars) + 1, 0),
      position_(static_cast<std::size_t>(db.num_vars) + 1, 0) {
  for (std::size_t ci = 0; ci < clauses_.size(); ++ci) {
    if (clauses_[ci].empty())
      empty_clause_ = true;
    else if (clauses_[ci].size() == 1)
      units_.push_back(ci);
    else
      watch(ci);
  }
}

void Propagator::watch(std::size_t ci) {
  watchers(clauses_[ci][0]).push_back(ci);
  watchers(clauses_[ci][1]).push_back(ci);
}

void Propagator::assign(Literal lit) {
  value_[static_cast<std::size_t>(lit.var)] = lit.positive ? 1 : -1;
  position_[static_cast<std::size_t>(lit.var)] = trail_.size();
  trail_.push_back(lit);
}

std::optional<std::size_t> Propagator::propagate() {
  while (qhead_ < trail_.size()) {
    Literal falsified = ~trail_[qhead_++];
    std::vector<std::size_t>& ws = watchers(falsified);
    for (std::size_t i = 0; i < ws.size();) {
      std::size_t ci = ws[i];
      Clause& c = clauses_[ci];
      if (c[0] == falsified) std::swap(c[0], c[1]);
      if (value(c[0]) == 1) {
        ++i;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k) {
        if (value(c[k]) != -1) {
          std::swap(c[1], c[k]);
          watchers(c[1]).push_back(ci);
          ws[i] = ws.back();
          ws.pop_back();
          moved = true;
          break;
        }
      }
      if (moved) continue;
      if (value(c[0]) == -1) return ci;
      assign(c[0]);
      ++i;
    }
  }
  return std::nullopt;
}

void Propagator::undo(std::size_t trail_size) {
  while (trail_.size() > trail_size) {
    value_[static_cast<std::size_t>(trail_.back().var)] = 0;
    trail_.pop_back();
  }
  qhead_ = std::min(qhead_, trail_size);
}

void Propagator::add_learned(Clause c) {
  std::sort(c.begin(), c.end(), [&](Literal a, Literal b) {
    return position_[static_cast<std::size_t>(a.var)] > position_[static_cast<std::size_t>(b.var)];
  });
  clauses_.push_back(std::move(c));
  if (clauses_.back().size() >= 2) watch(clauses_.size() - 1);
}

}  // namespace smtkc::detail

namespace smtkc {

UnitResult unit_propagate(const ClauseDb& db, const PartialAssignment& assignment) {
  detail::Propagator p(db);
  UnitResult out;
  if (p.has_empty_clause()) {
    for (std::size_t ci = 0; ci < db.clauses.size(); ++ci)
      if (db.clauses[ci].empty()) {
        out.conflict = ci;
        return out;
      }
  }
  for (int v = 1; v <= db.num_vars; ++v)
    if (std::int8_t x = assignment.at(static_cast<std::size_t>(v)); x != 0) p.assign({v, x > 0});
  std::size_t given = p.trail().size();
  for (std::size_t ci : p.initial_units()) {
    Literal l = db.clauses[ci].front();
    if (p.value(l) == -1) {
      out.conflict = ci;
      break;
    }
    if (p.value(l) == 0) p.assign(l);
  }
  if (!out.conflict) out.conflict = p.propagate();
  out.implied.assign(p.trail().begin() + static_cast<std::ptrdiff_t>(given), p.trail().end());
  return out;
}

}  // namespace smtkc
