#include "smtkc/compiler.hpp"
#include "smtkc/eager.hpp"

namespace smtkc {

DdnnfGraph compile_formula(const Formula& f, const CompileConfig& cfg, CompileStats* stats) {
  Abstraction abs = boolean_abstract(f);
  ClauseDb db = to_cnf(abs.formula);
  if (cfg.mode == CompileMode::Eager) db = eager_encode(std::move(db), abs.map, cfg.eager_k);
  return compile(db, abs.map, cfg, stats);
}

}  // namespace smtkc
