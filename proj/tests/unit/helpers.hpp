// Small builders shared by the unit tests.

#ifndef J2KIT_TESTS_HELPERS_HPP
#define J2KIT_TESTS_HELPERS_HPP

#include <string>
#include <vector>

#include "j2kit/formula.hpp"
#include "j2kit/model.hpp"

namespace j2kit::test {

inline Formula f1(const std::string& text) { return parse(text, VarContext::standard(1)); }
inline Formula f2(const std::string& text) { return parse(text, VarContext::standard(2)); }

inline RawModel raw(int worlds, std::vector<std::pair<int, int>> r0, std::vector<std::pair<int, int>> r1,
                    std::vector<Valuation> val, int root = 0) {
  RawModel m;
  for (int w = 0; w < worlds; ++w) {
    m.worlds.push_back(w);
    m.val[w] = w < static_cast<int>(val.size()) ? val[w] : 0;
  }
  m.r0 = std::move(r0);
  m.r1 = std::move(r1);
  m.root = root;
  return m;
}

inline StratifiedModel model(int worlds, std::vector<std::pair<int, int>> r0,
                             std::vector<std::pair<int, int>> r1, std::vector<Valuation> val, int root = 0) {
  return stratify(close_relations(raw(worlds, std::move(r0), std::move(r1), std::move(val), root)));
}

/// x R0 y with the given valuations.
inline StratifiedModel chain0(Valuation x, Valuation y) { return model(2, {{0, 1}}, {}, {x, y}); }
/// x R1 y with the given valuations.
inline StratifiedModel chain1(Valuation x, Valuation y) { return model(2, {}, {{0, 1}}, {x, y}); }

}  // namespace j2kit::test

#endif  // J2KIT_TESTS_HELPERS_HPP
