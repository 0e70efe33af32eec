// j2kit/evaluator.hpp
//
// Batch forcing.  A set of formulas is flattened once into a topologically
// ordered instruction list over its shared DAG; evaluating it on a model
// yields one truth mask per formula.  This is what makes checking large
// substitution images over many models cheap.

#ifndef J2KIT_EVALUATOR_HPP
#define J2KIT_EVALUATOR_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "j2kit/formula.hpp"
#include "j2kit/model.hpp"

namespace j2kit {

class CompiledFormulas {
 public:
  CompiledFormulas() = default;
  explicit CompiledFormulas(std::span<const Formula> roots);
  explicit CompiledFormulas(Formula root) : CompiledFormulas(std::span<const Formula>(&root, 1)) {}

  std::size_t root_count() const noexcept { return roots_.size(); }
  std::size_t instruction_count() const noexcept { return ops_.size(); }

  /// Truth mask of every root formula on `m`.
  std::vector<WorldSet> evaluate(const StratifiedModel& m) const;
  /// Reuses `scratch` across calls to avoid allocation in tight loops.
  void evaluate(const StratifiedModel& m, std::vector<WorldSet>& scratch,
                std::vector<WorldSet>& out) const;
  /// Truth mask of the first root.
  WorldSet evaluate_first(const StratifiedModel& m, std::vector<WorldSet>& scratch) const;

 private:
  struct Op {
    Kind kind;
    std::uint8_t modality;
    std::uint16_t var;
    std::uint32_t a;
    std::uint32_t b;
  };
  void run(const StratifiedModel& m, std::vector<WorldSet>& slots) const;

  std::vector<Op> ops_;
  std::vector<std::uint32_t> roots_;
};

}  // namespace j2kit

#endif  // J2KIT_EVALUATOR_HPP
