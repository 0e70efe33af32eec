// j2kit/model.hpp
//
// Finite rooted Kripke models for J2 in sheet-normal form.
//
// A stratified model is a set of 1-sheets (E1-classes), each carrying an
// irreflexive transitive R1, together with a strict order on the sheets.  The
// world-level R0 is induced: x R0 y iff sheet(x) is below sheet(y).  Raw
// triples <W, R0, R1> are only an import format; they are checked by
// validate_frame and converted by stratify.
//
// World sets are 64-bit masks, so a model has at most 64 worlds.

#ifndef J2KIT_MODEL_HPP
#define J2KIT_MODEL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "j2kit/formula.hpp"

namespace j2kit {

using WorldSet = std::uint64_t;
inline constexpr int kMaxWorlds = 64;

inline constexpr WorldSet bit(int i) noexcept { return WorldSet{1} << i; }
inline bool has(WorldSet s, int i) noexcept { return (s >> i) & 1U; }

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotStratified : public ModelError {
 public:
  using ModelError::ModelError;
};

class NoRoot : public ModelError {
 public:
  using ModelError::ModelError;
};

class NotOneCongruent : public ModelError {
 public:
  using ModelError::ModelError;
};

/// Import format: arbitrary world ids, relations as pairs of ids.
struct RawModel {
  std::vector<int> worlds;
  std::vector<std::pair<int, int>> r0;
  std::vector<std::pair<int, int>> r1;
  std::map<int, Valuation> val;
  std::optional<int> root;
};

/// Replaces r0 and r1 by their transitive closures.
RawModel close_relations(RawModel m);

struct FrameViolation {
  std::string condition;
  std::vector<int> witness;  // world ids
};

/// Each condition is checked and reported on its own; the flags are not
/// assumed to imply one another.
///   ignatiev_ok   : each R_i irreflexive and transitive, and
///                   x R1 y => (x R0 z <=> y R0 z)
///   j2_ok         : x R_m y & y R_n z => x R_m z, for m <= n
///   stratified_ok : z R_m x & y R_n x => z R_m y, for m < n
struct FrameReport {
  bool ignatiev_ok = true;
  bool j2_ok = true;
  bool stratified_ok = true;
  std::vector<FrameViolation> violations;

  bool all_ok() const noexcept { return ignatiev_ok && j2_ok && stratified_ok; }
};

/// Throws ModelError when a relation or the root mentions an unknown world.
FrameReport validate_frame(const RawModel& m);

struct Sheet {
  std::vector<int> worlds;  // ascending
  WorldSet mask = 0;

  bool operator==(const Sheet&) const = default;
};

class StratifiedModel {
 public:
  /// World-level description used to build models programmatically.  R1 and
  /// the sheet order are closed on construction; sheets are renormalized to
  /// E1-classes, so `sheet_of` may group worlds coarser than the result.
  struct Parts {
    std::vector<int> sheet_of;                // world -> provisional sheet
    std::vector<WorldSet> r1;                 // world -> R1 successors
    std::vector<std::uint64_t> sheet_above;   // provisional sheet -> sheets above it
    std::vector<Valuation> val;               // world -> true variables
    int root = 0;
    std::vector<int> ids;                     // optional external ids, defaults to 0..n-1
  };

  /// Throws NotStratified / NoRoot when the parts do not describe a rooted
  /// stratified model.
  static StratifiedModel from_parts(Parts parts);

  /// Single world with the given valuation.
  static StratifiedModel single(Valuation v = 0);

  int size() const noexcept { return static_cast<int>(val_.size()); }
  int root() const noexcept { return root_; }
  WorldSet all() const noexcept { return size() == 64 ? ~WorldSet{0} : bit(size()) - 1; }

  const std::vector<Sheet>& sheets() const noexcept { return sheets_; }
  int sheet_of(int w) const { return sheet_of_.at(w); }
  /// Sheets strictly above sheet s (bitmask over sheet indices).
  std::uint64_t sheet_above(int s) const { return sheet_above_.at(s); }
  bool sheet_less(int a, int b) const { return (sheet_above_.at(a) >> b) & 1U; }
  int root_sheet() const { return sheet_of_.at(root_); }

  WorldSet r0(int w) const { return r0_.at(w); }
  WorldSet r1(int w) const { return r1_.at(w); }
  WorldSet succ(int modality, int w) const { return modality == 0 ? r0_.at(w) : r1_.at(w); }
  bool r0(int x, int y) const { return has(r0_.at(x), y); }
  bool r1(int x, int y) const { return has(r1_.at(x), y); }
  /// Worlds reachable from w (including w).
  WorldSet cone(int w) const { return bit(w) | r0_.at(w) | r1_.at(w); }

  Valuation val(int w) const { return val_.at(w); }
  const std::vector<Valuation>& valuation() const noexcept { return val_; }
  const std::vector<int>& ids() const noexcept { return ids_; }
  int id(int w) const { return ids_.at(w); }
  std::optional<int> index_of_id(int id) const;

  /// Same frame, different valuation (sizes must match).
  StratifiedModel with_valuation(std::vector<Valuation> val) const;

  Parts parts() const;

  /// Structural equality including world numbering and ids.
  friend bool operator==(const StratifiedModel&, const StratifiedModel&) = default;

 private:
  StratifiedModel() = default;

  std::vector<Sheet> sheets_;
  std::vector<std::uint64_t> sheet_above_;
  std::vector<int> sheet_of_;
  std::vector<WorldSet> r0_;
  std::vector<WorldSet> r1_;
  std::vector<Valuation> val_;
  std::vector<int> ids_;
  int root_ = 0;
};

struct PointedModel {
  StratifiedModel model;
  int point = 0;
};

/// Raw view of a stratified model (closed relations, original ids).
RawModel to_raw(const StratifiedModel& m);

/// Converts a validated raw model; requires all three frame conditions and a
/// root generating every world.
StratifiedModel stratify(const RawModel& m);

/// Forcing at a single world.  Throws ModelError on an unknown world.
bool force(const StratifiedModel& m, int world, Formula f);
/// Worlds forcing f.
WorldSet truth_set(const StratifiedModel& m, Formula f);
bool globally_true(const StratifiedModel& m, Formula f);

/// Restriction to `keep` (which must contain `new_root` and be generated by it
/// or at least reachable from it); relations are restricted, sheets split as
/// needed, worlds renumbered in ascending order.
StratifiedModel induced_submodel(const StratifiedModel& m, WorldSet keep, int new_root);

/// Least subset containing x closed under R0 and R1, rooted at x.
PointedModel generated_submodel(const StratifiedModel& m, int x);

/// Same frame and root; valuation replaced at the root only.
StratifiedModel variant(const StratifiedModel& m, Valuation root_val);

/// sigma(W): p_i true at x iff W, x forces sigma(p_i).
StratifiedModel apply_subst_model(const Substitution& s, const StratifiedModel& m);

// ---------------------------------------------------------------------------
// Canonical forms, 1-congruence and 1-sums
// ---------------------------------------------------------------------------

/// Canonical labeling up to isomorphism.  `order[k]` is the original index of
/// the world placed at position k; `code` is byte-identical for isomorphic
/// models (root, relations and valuation all respected).
struct CanonicalForm {
  std::vector<int> order;
  std::string code;
};

CanonicalForm canonical_form(const StratifiedModel& m);

/// Canonically relabeled copy (ids reset to 0..n-1).
StratifiedModel canonicalize(const StratifiedModel& m);

/// Canonical code of the unrooted model left after deleting the root's
/// 1-sheet (empty string for an empty residue).
std::string residue_code(const StratifiedModel& m);

/// Residues coincide up to isomorphism.
bool one_congruent(const StratifiedModel& a, const StratifiedModel& b);

/// Merges the root sheets of pairwise 1-congruent models over one shared copy
/// of their residue and adds a fresh empty-valuation root R1-below every
/// world of the merged sheet.  Throws NotOneCongruent.
StratifiedModel one_sum(const std::vector<StratifiedModel>& ms);

}  // namespace j2kit

#endif  // J2KIT_MODEL_HPP
